# tests/aplicacion/servicios/test_discretizacion_servicio.py
from fractions import Fraction

import numpy as np
import pytest

from app.dominio.excepciones.dominio_excepciones import (
    ConfiguracionInvalidaError,
    DescuentoInvalidoError,
    PasoInvalidoError,
)
from app.servicios.discretizacion_servicio import (
    build_time_grid,
    horizon_for,
    rejilla_refinada,
    truncation_bound,
)


@pytest.mark.parametrize(
    "c, epsilon, paso, esperado",
    [
        (0.5, 1e-3, 1, Fraction(10)),
        (0.5, 0.25, 1, Fraction(2)),
        (0.9, 0.05, "1/2", Fraction(57, 2)),
        (0.5, 2.0, 1, Fraction(0)),
    ],
)
def test_horizon_for(c, epsilon, paso, esperado):
    # Act
    horizonte = horizon_for(c, epsilon, paso)

    # Assert
    assert horizonte == esperado
    assert c ** float(horizonte) <= epsilon * (1 + 1e-12)


def test_horizon_for_es_el_menor_multiplo():
    # Arrange
    c, epsilon, paso = 0.8, 1e-2, Fraction(1, 4)

    # Act
    horizonte = horizon_for(c, epsilon, paso)

    # Assert
    assert c ** float(horizonte) <= epsilon
    assert c ** float(horizonte - paso) > epsilon


@pytest.mark.parametrize("c", [0.0, 1.0, 1.5, -0.2])
def test_descuento_fuera_de_rango(c):
    with pytest.raises(DescuentoInvalidoError):
        horizon_for(c, 1e-3)


def test_epsilon_no_positivo():
    with pytest.raises(ConfiguracionInvalidaError):
        horizon_for(0.5, 0.0)


@pytest.mark.parametrize("paso", [0, "-1/2", "medio"])
def test_paso_invalido(paso):
    with pytest.raises(PasoInvalidoError):
        build_time_grid(0.5, 1e-3, paso)


def test_build_time_grid():
    # Act
    rejilla = build_time_grid(0.5, 1e-3, 1)
    fina = build_time_grid(0.5, 1e-3, "1/2")

    # Assert
    assert rejilla.times == tuple(Fraction(k) for k in range(11))
    assert rejilla.horizon == 10
    assert len(fina) == 21
    assert fina.paso == Fraction(1, 2)


def test_truncation_bound_respeta_la_cota():
    # Arrange
    generador = np.random.default_rng(11)
    rejilla = build_time_grid(0.7, 1e-4, 1)
    valores = generador.random((len(rejilla), 3, 3))

    # Act
    diferencia, cota = truncation_bound(valores, 0.7, rejilla, 6)

    # Assert
    assert cota == pytest.approx(0.7 ** 6)
    assert 0.0 <= diferencia <= cota


def test_truncation_bound_exige_una_fila_por_tiempo():
    rejilla = build_time_grid(0.5, 0.1, 1)
    with pytest.raises(ConfiguracionInvalidaError):
        truncation_bound(np.zeros((len(rejilla) + 1, 2)), 0.5, rejilla, 1)


def test_rejilla_refinada_divide_el_paso():
    # Arrange
    rejilla = build_time_grid(0.5, 0.1, 1)

    # Act
    fina = rejilla_refinada(rejilla)

    # Assert
    assert fina.paso == Fraction(1, 2)
    assert fina.horizon == rejilla.horizon
    assert set(rejilla.times) <= set(fina.times)


@pytest.mark.parametrize(
    "c, epsilon, paso, tiempos",
    [
        (0.5, 0.5, "1/2", ["0", "1/2", "1"]),
        (0.5, 1.0, 1, ["0"]),
        (0.9, 0.1, 1, [str(k) for k in range(23)]),
    ],
)
def test_rejillas_de_referencia(c, epsilon, paso, tiempos):
    assert build_time_grid(c, epsilon, paso).times == tuple(Fraction(t) for t in tiempos)


def test_horizonte_de_referencia():
    assert horizon_for(0.5, 0.5) == 1
    assert horizon_for(0.9, 0.01) == 44
