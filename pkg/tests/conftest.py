"""
Configuración global para pruebas.
Este archivo contiene fixtures y configuraciones que se aplican a todas las pruebas.
"""
import os
from pathlib import Path

import numpy as np
import pytest
from dotenv import load_dotenv

ENV_TEST_PATH = Path(__file__).parent.parent / ".env.test"

# Settings se instancia al importar app.core.config: las variables deben
# estar cargadas antes de que las pruebas importen los módulos de la app.
if ENV_TEST_PATH.exists():
    load_dotenv(ENV_TEST_PATH, override=True)

from app.core.deps import (  # noqa: E402
    get_logica_servicio,
    get_metrica_servicio,
    get_proceso_servicio,
    get_transporte_servicio,
    get_trayectorias_servicio,
)
from app.dominio.entidades.modelo_proceso import EspacioEstados, Observable  # noqa: E402
from tests.fabricas import cadena  # noqa: E402


# Configuramos variables de entorno para pruebas antes de que se importen los módulos
@pytest.fixture(scope="session", autouse=True)
def setup_test_environment():
    """
    Configura variables de entorno para pruebas cargando el archivo .env.test.
    Este fixture se ejecuta automáticamente antes de todas las pruebas.
    """
    # Guardamos las variables de entorno originales
    original_env = os.environ.copy()

    # Cargamos variables de entorno desde .env.test
    if ENV_TEST_PATH.exists():
        load_dotenv(ENV_TEST_PATH, override=True)
    else:
        pytest.fail(f"Archivo .env.test no encontrado en {ENV_TEST_PATH}. Por favor, crea este archivo con las variables de entorno para pruebas.")

    yield

    # Restauramos las variables de entorno originales
    os.environ.clear()
    os.environ.update(original_env)


# =================================================================
# SERVICIOS
# =================================================================
@pytest.fixture
def proceso_servicio():
    return get_proceso_servicio()


@pytest.fixture
def trayectorias_servicio():
    return get_trayectorias_servicio()


@pytest.fixture
def transporte_servicio():
    return get_transporte_servicio()


@pytest.fixture
def metrica_servicio():
    return get_metrica_servicio()


@pytest.fixture
def logica_servicio():
    return get_logica_servicio()


# =================================================================
# MODELOS CANÓNICOS
# =================================================================
@pytest.fixture
def cadena_estacionaria():
    """Cadena de dos estados con M = I y obs = (0, 1)."""
    return cadena([[1.0, 0.0], [0.0, 1.0]], [0.0, 1.0])


@pytest.fixture
def cadena_uniforme():
    """Cadena de dos estados con M = [[½, ½], [½, ½]] y obs = (0, 1)."""
    return cadena([[0.5, 0.5], [0.5, 0.5]], [0.0, 1.0])


@pytest.fixture
def cadena_tres_estados():
    return cadena(
        [[0.6, 0.4, 0.0], [0.2, 0.5, 0.3], [0.0, 0.3, 0.7]],
        [0.0, 0.5, 1.0],
        labels=("bajo", "medio", "alto"),
    )


@pytest.fixture
def modelo_browniano_pequeno(proceso_servicio):
    """Browniano sobre [−1, 1] con paso ½ y obs = identidad recortada."""
    espacio = EspacioEstados.rejilla_uniforme(-1.0, 1.0, 0.5)
    obs = Observable((np.asarray(espacio.points) + 1.0) / 2.0)
    return proceso_servicio.modelo_browniano(espacio, obs, 5.0)
