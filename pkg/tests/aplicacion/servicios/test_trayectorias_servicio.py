# tests/aplicacion/servicios/test_trayectorias_servicio.py
import numpy as np
import pytest

from app.dominio.excepciones.dominio_excepciones import (
    ConfiguracionInvalidaError,
    EnumeracionDemasiadoGrandeError,
    PrecondicionFallidaError,
)
from app.dominio.objetos_valor.modo_trayectorias import ModoTrayectorias, TipoModoTrayectorias
from app.servicios.trayectorias_servicio import TrayectoriasServicio, semilla_derivada
from tests.fabricas import cadena, rejilla


def test_enumeracion_exacta_reproduce_las_marginales(trayectorias_servicio, cadena_tres_estados):
    # Arrange
    tg = rejilla(0, 1, 2, 3)
    matriz = cadena_tres_estados.matriz_transicion

    for x in range(3):
        # Act
        conjunto = trayectorias_servicio.enumerate_trajectories(cadena_tres_estados, x, tg)
        marginales = trayectorias_servicio.marginals(conjunto, 3)

        # Assert
        assert conjunto.exacto
        assert conjunto.origen == x
        assert conjunto.weights.sum() == pytest.approx(1.0, abs=1e-12)
        for k in range(len(tg)):
            np.testing.assert_allclose(marginales[k], np.linalg.matrix_power(matriz, k)[x], atol=1e-12)


def test_enumeracion_solo_guarda_trayectorias_posibles(trayectorias_servicio, cadena_estacionaria):
    # Act
    conjunto = trayectorias_servicio.enumerate_trajectories(cadena_estacionaria, 1, rejilla(0, 1, 2))

    # Assert
    assert len(conjunto) == 1
    assert conjunto.trajectories.tolist() == [[1, 1, 1]]


def test_enumeracion_respeta_el_tope(cadena_tres_estados):
    # Arrange
    servicio = TrayectoriasServicio(enumeration_cap=10)

    # Act / Assert
    with pytest.raises(EnumeracionDemasiadoGrandeError):
        servicio.enumerate_trajectories(cadena_tres_estados, 0, rejilla(0, 1, 2))


def test_enumeracion_exige_cadena_finita(trayectorias_servicio, modelo_browniano_pequeno):
    with pytest.raises(PrecondicionFallidaError):
        trayectorias_servicio.enumerate_trajectories(modelo_browniano_pequeno, 0, rejilla(0, 1))


def test_estado_inexistente(trayectorias_servicio, cadena_uniforme):
    with pytest.raises(ConfiguracionInvalidaError):
        trayectorias_servicio.enumerate_trajectories(cadena_uniforme, 2, rejilla(0, 1))


def test_muestreo_determinista_por_semilla(trayectorias_servicio, cadena_tres_estados):
    # Arrange
    tg = rejilla(0, 1, 2)

    # Act
    a = trayectorias_servicio.sample_trajectories(cadena_tres_estados, 0, tg, 200, seed=5)
    b = trayectorias_servicio.sample_trajectories(cadena_tres_estados, 0, tg, 200, seed=5)
    c = trayectorias_servicio.sample_trajectories(cadena_tres_estados, 0, tg, 200, seed=6)

    # Assert
    np.testing.assert_array_equal(a.trajectories, b.trajectories)
    assert not np.array_equal(a.trajectories, c.trajectories)
    assert not a.exacto
    assert np.all(a.trajectories[:, 0] == 0)
    np.testing.assert_allclose(a.weights, 1 / 200)


def test_muestreo_aproxima_las_marginales(trayectorias_servicio, cadena_tres_estados):
    # Arrange
    tg = rejilla(0, 1, 2)
    matriz = cadena_tres_estados.matriz_transicion

    # Act
    conjunto = trayectorias_servicio.sample_trajectories(cadena_tres_estados, 1, tg, 20000, seed=3)
    marginales = trayectorias_servicio.marginals(conjunto, 3)

    # Assert
    np.testing.assert_allclose(marginales[2], (matriz @ matriz)[1], atol=0.02)


def test_muestreo_solo_visita_transiciones_posibles(trayectorias_servicio, cadena_tres_estados):
    # Act
    conjunto = trayectorias_servicio.sample_trajectories(cadena_tres_estados, 0, rejilla(0, 1, 2, 3), 500, seed=1)

    # Assert
    matriz = cadena_tres_estados.matriz_transicion
    for camino in conjunto.trajectories:
        assert all(matriz[a, b] > 0 for a, b in zip(camino, camino[1:]))


def test_muestreo_exige_muestras(trayectorias_servicio, cadena_uniforme):
    with pytest.raises(ConfiguracionInvalidaError):
        trayectorias_servicio.sample_trajectories(cadena_uniforme, 0, rejilla(0, 1), 0, seed=1)


def test_ensembles_for_automatico_recurre_a_monte_carlo(cadena_tres_estados):
    # Arrange
    servicio = TrayectoriasServicio(enumeration_cap=10)
    modo = ModoTrayectorias(TipoModoTrayectorias.AUTOMATICO, 50, 9)

    # Act
    conjuntos = servicio.ensembles_for(cadena_tres_estados, rejilla(0, 1, 2), modo)

    # Assert
    assert [c.origen for c in conjuntos] == [0, 1, 2]
    assert all(not c.exacto and len(c) == 50 for c in conjuntos)
    assert len({c.semilla for c in conjuntos}) == 3


def test_ensembles_for_exacto_propaga_el_tope(cadena_tres_estados):
    servicio = TrayectoriasServicio(enumeration_cap=10)
    with pytest.raises(EnumeracionDemasiadoGrandeError):
        servicio.ensembles_for(cadena_tres_estados, rejilla(0, 1, 2), ModoTrayectorias.exacto())


def test_semilla_derivada_es_determinista():
    assert semilla_derivada(7, 0) == semilla_derivada(7, 0)
    assert semilla_derivada(7, 0) != semilla_derivada(7, 1)


def test_cadena_uniforme_de_tres_estados_tiene_27_trayectorias(trayectorias_servicio):
    # Arrange
    modelo = cadena(np.full((3, 3), 1 / 3), [0.0, 0.5, 1.0])

    # Act
    conjunto = trayectorias_servicio.enumerate_trajectories(modelo, 0, rejilla(0, 1, 2, 3))

    # Assert
    assert len(conjunto) == 27
    np.testing.assert_allclose(conjunto.weights, 1 / 27, atol=1e-15)


def test_rejilla_trivial_da_trayectorias_constantes(trayectorias_servicio, cadena_uniforme):
    conjunto = trayectorias_servicio.sample_trajectories(cadena_uniforme, 1, rejilla(0), 10, seed=0)
    assert conjunto.trajectories.tolist() == [[1]] * 10


def test_marginal_empirica_de_la_cadena_uniforme(trayectorias_servicio, cadena_uniforme):
    # Act
    conjunto = trayectorias_servicio.sample_trajectories(cadena_uniforme, 0, rejilla(0, 1), 100000, seed=42)

    # Assert
    np.testing.assert_allclose(trayectorias_servicio.marginals(conjunto, 2)[1], [0.5, 0.5], atol=0.01)
