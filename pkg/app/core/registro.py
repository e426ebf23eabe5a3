# app/core/registro.py
import logging
from typing import Optional

from app.core.config import settings

FORMATO_REGISTRO = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configurar_registro(nivel: Optional[str] = None) -> None:
    """
    Configura el logger raíz de la aplicación.

    Args:
        nivel: Nivel de registro; si es None se usa settings.LOG_LEVEL.
    """
    logging.basicConfig(
        level=(nivel or settings.LOG_LEVEL).upper(),
        format=FORMATO_REGISTRO,
    )
