"""
Manejador global de excepciones de la CLI.

Traduce las excepciones de dominio a códigos de salida:
0 éxito, 1 uso o configuración, 2 violación de invariante, 3 error interno.
"""
import logging
import sys
from typing import Callable

from app.dominio.excepciones.dominio_excepciones import (
    ArtefactoError,
    ConfiguracionInvalidaError,
    DirectorioBloqueadoError,
    DistribucionInvalidaError,
    DominioExcepcion,
    EnumeracionDemasiadoGrandeError,
    FormulaError,
    PrecondicionFallidaError,
    SecuenciaInvalidaError,
    TiempoNoSoportadoError,
    TransporteError,
    ViolacionInvarianteError,
)

# Configuración del logger
logger = logging.getLogger(__name__)

SALIDA_OK = 0
SALIDA_USO = 1
SALIDA_INVARIANTE = 2
SALIDA_INTERNA = 3

# El orden importa: se usa la primera clase que coincide.
_CODIGOS: tuple[tuple[type[DominioExcepcion], int], ...] = (
    (ViolacionInvarianteError, SALIDA_INVARIANTE),
    (DirectorioBloqueadoError, SALIDA_USO),
    (ConfiguracionInvalidaError, SALIDA_USO),
    (FormulaError, SALIDA_USO),
    (TiempoNoSoportadoError, SALIDA_USO),
    (EnumeracionDemasiadoGrandeError, SALIDA_USO),
    (PrecondicionFallidaError, SALIDA_USO),
    (DistribucionInvalidaError, SALIDA_USO),
    (SecuenciaInvalidaError, SALIDA_USO),
    (TransporteError, SALIDA_INTERNA),
    (ArtefactoError, SALIDA_INTERNA),
)


def codigo_salida(exc: BaseException) -> int:
    """Código de salida para una excepción; las no previstas son errores internos."""
    for clase, codigo in _CODIGOS:
        if isinstance(exc, clase):
            return codigo
    if isinstance(exc, DominioExcepcion):
        return SALIDA_USO
    return SALIDA_INTERNA


def manejar_excepciones(comando: Callable[[], int]) -> int:
    """
    Ejecuta un comando y convierte cualquier excepción en un código de salida.

    El mensaje se escribe en stderr; las violaciones de invariantes se listan
    una por línea.
    """
    try:
        return comando()
    except ViolacionInvarianteError as exc:
        logger.warning(f"Violación de invariante: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        for violacion in exc.violaciones:
            print(f"  - {violacion}", file=sys.stderr)
        return SALIDA_INVARIANTE
    except DominioExcepcion as exc:
        codigo = codigo_salida(exc)
        if codigo == SALIDA_INTERNA:
            logger.error(f"Error interno: {exc}", exc_info=True)
        else:
            logger.warning(f"Excepción de dominio: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return codigo
    except KeyboardInterrupt:
        print("interrumpido", file=sys.stderr)
        return SALIDA_INTERNA
    except Exception as exc:
        logger.error(f"Error no manejado: {exc}", exc_info=True)
        print(f"error interno: {exc}", file=sys.stderr)
        return SALIDA_INTERNA
