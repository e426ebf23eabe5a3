# tests/infraestructura/configuracion/test_cargador_config.py
import json

import pytest

from app.dominio.excepciones.dominio_excepciones import ArtefactoError, ConfiguracionInvalidaError
from app.infraestructura.configuracion.cargador_config import CargadorConfiguracion, fusionar_sobrescrituras

DOCUMENTO = {
    "process": {"kind": "finite-chain", "matrix": [[0.5, 0.5], [0.5, 0.5]], "observable": {"values": [0, 1]}},
    "discount": 0.5,
}


@pytest.fixture
def cargador():
    return CargadorConfiguracion()


@pytest.fixture
def ruta_config(tmp_path):
    ruta = tmp_path / "config.json"
    ruta.write_text(json.dumps(DOCUMENTO), encoding="utf-8")
    return ruta


def test_fusionar_sobrescrituras_no_modifica_el_original():
    # Act
    resultado = fusionar_sobrescrituras(DOCUMENTO, {"discount": 0.9, "tolerances.epsilon_time": 0.1, "seed": None})

    # Assert
    assert resultado["discount"] == 0.9
    assert resultado["tolerances"] == {"epsilon_time": 0.1}
    assert "seed" not in resultado
    assert DOCUMENTO["discount"] == 0.5


def test_fusionar_sobre_un_bloque_que_no_es_objeto():
    with pytest.raises(ConfiguracionInvalidaError):
        fusionar_sobrescrituras({"logic": 3}, {"logic.max_depth": 2})


def test_cargar_con_sobrescrituras(cargador, ruta_config):
    # Act
    config = cargador.cargar(ruta_config, {"functional": "G", "path_mode": "mc:50", "seed": 4})

    # Assert
    assert config.discount == 0.5
    assert config.funcionales == ("G",)
    assert str(config.modo_trayectorias) == "mc:50"


def test_descuento_uno_es_invalido(cargador, ruta_config):
    with pytest.raises(ConfiguracionInvalidaError) as info:
        cargador.cargar(ruta_config, {"discount": 1.0})
    assert "discount" in str(info.value)


def test_monte_carlo_sin_semilla(cargador, ruta_config):
    with pytest.raises(ConfiguracionInvalidaError):
        cargador.cargar(ruta_config, {"functional": "G", "path_mode": "mc:10"})


def test_archivo_inexistente(cargador, tmp_path):
    with pytest.raises(ConfiguracionInvalidaError):
        cargador.cargar(tmp_path / "no_existe.json")


def test_json_invalido(cargador, tmp_path):
    # Arrange
    ruta = tmp_path / "roto.json"
    ruta.write_text("{\"discount\": ", encoding="utf-8")

    # Act / Assert
    with pytest.raises(ConfiguracionInvalidaError) as info:
        cargador.cargar(ruta)
    assert "JSON" in str(info.value)


def test_documento_que_no_es_objeto(cargador, tmp_path):
    ruta = tmp_path / "lista.json"
    ruta.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfiguracionInvalidaError):
        cargador.cargar(ruta)


def test_punto_fijo_corrupto(cargador, tmp_path):
    ruta = tmp_path / "punto_fijo_F.json"
    ruta.write_text(json.dumps({"funcional": "F"}), encoding="utf-8")
    with pytest.raises(ArtefactoError):
        cargador.cargar_punto_fijo(ruta)
