# app/core/config.py
from typing import Optional
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Configuraciones de la aplicación cargadas desde variables de entorno.
    Utiliza pydantic-settings para validar y gestionar la configuración.

    Son los valores por defecto de tolerancias y límites; el documento de
    configuración de cada ejecución y los flags de la CLI pueden sobrescribirlos.
    """
    # Carga las variables desde un archivo .env si existe.
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    # Configuración de la Aplicación
    LOG_LEVEL: str = "INFO"

    # Presupuesto de error: ε_total = ε_time + ε_grid + ε_fix
    EPSILON_TIME: float = 1e-3
    EPSILON_GRID: float = 1e-2
    EPSILON_FIXPOINT: float = 1e-6
    MAX_ITER: int = 100

    # Trayectorias
    ENUMERATION_CAP: int = 10**6
    MC_NOISE_SEEDS: int = 5

    # Transporte óptimo
    OT_MAX_ITER: int = 100000
    DUALITY_TOLERANCE: float = 1e-9
    MARGINAL_TOLERANCE: float = 1e-9
    PSEUDOMETRIC_TOLERANCE: float = 1e-9

    # Paralelismo sobre pares de estados (None = lo decide concurrent.futures)
    MAX_WORKERS: Optional[int] = 4

    # Lógica
    GADGET_DENOMINATOR_BITS: int = 20

    # Artefactos
    CSV_SIGNIFICANT_DIGITS: int = 12

# Instancia única de la configuración que será importada en otros módulos.
settings = Settings()
