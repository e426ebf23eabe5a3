# tests/aplicacion/servicios/test_metrica_servicio.py
import logging

import numpy as np
import pytest

from app.dominio.excepciones.dominio_excepciones import ConfiguracionInvalidaError, PrecondicionFallidaError
from app.dominio.objetos_valor.matriz_pseudometrica import MatrizPseudometrica
from app.dominio.objetos_valor.modo_trayectorias import ModoTrayectorias
from app.servicios.discretizacion_servicio import build_time_grid
from app.servicios.metrica_servicio import discounted_uniform_cost
from tests.fabricas import cadena, cadena_aleatoria, pseudometrica_aleatoria, rejilla


def _matriz(valores) -> MatrizPseudometrica:
    return MatrizPseudometrica(np.array(valores, dtype=float))


class TestObsMetric:
    def test_diferencias_absolutas(self, metrica_servicio):
        # Arrange
        modelo = cadena(np.eye(3), [0.0, 0.25, 1.0])

        # Act
        delta_0 = metrica_servicio.obs_metric(modelo)

        # Assert
        np.testing.assert_allclose(delta_0.values, [[0, 0.25, 1], [0.25, 0, 0.75], [1, 0.75, 0]])

    def test_observable_constante(self, metrica_servicio):
        assert metrica_servicio.obs_metric(cadena(np.eye(2), [0.3, 0.3])).values.max() == 0.0


class TestFuncionales:
    def test_discounted_uniform_cost(self):
        # Arrange
        m = _matriz([[0.0, 1.0], [1.0, 0.0]])

        # Act
        costes = discounted_uniform_cost(m, np.array([[0, 1], [0, 0]]), np.array([[0, 0]]), rejilla(0, 1), 0.5)

        # Assert
        np.testing.assert_allclose(costes, [[0.5], [0.0]])

    def test_discounted_uniform_cost_exige_la_longitud_de_la_rejilla(self):
        with pytest.raises(ConfiguracionInvalidaError):
            discounted_uniform_cost(MatrizPseudometrica.cero(2), np.zeros((1, 3)), np.zeros((1, 3)), rejilla(0, 1), 0.5)

    @pytest.mark.parametrize("funcional", ["F", "G"])
    def test_cero_es_punto_fijo(self, metrica_servicio, cadena_tres_estados, funcional):
        # Arrange
        aplicar = metrica_servicio.aplicador(funcional, cadena_tres_estados, rejilla(0, 1, 2), 0.5, None)

        # Act / Assert
        assert aplicar(MatrizPseudometrica.cero(3)).values.max() == pytest.approx(0.0, abs=1e-12)

    def test_apply_F_cadena_estacionaria(self, metrica_servicio, cadena_estacionaria):
        # Arrange
        delta_0 = metrica_servicio.obs_metric(cadena_estacionaria)

        # Act
        resultado = metrica_servicio.apply_F(delta_0, cadena_estacionaria, rejilla(0, 1), 0.5)

        # Assert
        assert resultado[0, 1] == pytest.approx(1.0)

    def test_apply_G_cadena_uniforme(self, metrica_servicio, cadena_uniforme):
        # Act
        resultado = metrica_servicio.apply_G(_matriz([[0, 1], [1, 0]]), cadena_uniforme, rejilla(0, 1), 0.5)

        # Assert
        assert resultado[0, 1] == pytest.approx(1.0)

    @pytest.mark.parametrize("funcional", ["F", "G"])
    def test_rejilla_trivial_devuelve_m(self, metrica_servicio, cadena_tres_estados, funcional):
        # Arrange
        m = _matriz([[0, 0.2, 0.5], [0.2, 0, 0.4], [0.5, 0.4, 0]])
        aplicar = metrica_servicio.aplicador(funcional, cadena_tres_estados, rejilla(0), 0.5, None)

        # Act / Assert
        np.testing.assert_allclose(aplicar(m).values, m.values, atol=1e-12)

    def test_expansivos_monotonos_y_G_domina_a_F(self, metrica_servicio):
        generador = np.random.default_rng(31)
        tg = rejilla(0, 1, 2)
        for _ in range(10):
            # Arrange
            modelo = cadena_aleatoria(generador, 4)
            grande = MatrizPseudometrica(pseudometrica_aleatoria(generador, 4))
            chica = MatrizPseudometrica(0.6 * grande.values)

            # Act
            f_grande = metrica_servicio.apply_F(grande, modelo, tg, 0.7)
            f_chica = metrica_servicio.apply_F(chica, modelo, tg, 0.7)
            g_grande = metrica_servicio.apply_G(grande, modelo, tg, 0.7)

            # Assert
            assert np.all(f_grande.values >= grande.values - 1e-12)
            assert np.all(g_grande.values >= grande.values - 1e-9)
            assert np.all(f_chica.values <= f_grande.values + 1e-12)
            assert np.all(f_grande.values <= g_grande.values + 1e-9)

    def test_funcional_desconocido(self, metrica_servicio, cadena_uniforme):
        with pytest.raises(ConfiguracionInvalidaError):
            metrica_servicio.aplicador("H", cadena_uniforme, rejilla(0, 1), 0.5, None)


class TestPuntoFijo:
    @pytest.mark.parametrize("funcional", ["F", "G"])
    def test_cadena_estacionaria(self, metrica_servicio, cadena_estacionaria, funcional):
        # Act
        informe = metrica_servicio.iterate_to_fixpoint(funcional, cadena_estacionaria, rejilla(0, 1), 0.5)

        # Assert
        assert informe.converged
        assert informe.iteraciones == 1
        assert len(informe.iterates) == 2
        assert informe.final[0, 1] == pytest.approx(1.0)

    def test_observable_constante_da_cero(self, metrica_servicio):
        # Arrange
        modelo = cadena([[0.2, 0.8], [0.6, 0.4]], [0.5, 0.5])

        # Act
        informe = metrica_servicio.iterate_to_fixpoint("F", modelo, rejilla(0, 1, 2), 0.5)

        # Assert
        assert informe.final.values.max() == 0.0
        assert informe.iteraciones == 1

    def test_iterados_crecientes_y_residuo_pequeno(self, metrica_servicio, cadena_tres_estados):
        # Arrange
        tg = build_time_grid(0.7, 1e-3, 1)

        # Act
        informe = metrica_servicio.iterate_to_fixpoint("F", cadena_tres_estados, tg, 0.7, epsilon_fix=1e-7)

        # Assert
        assert informe.converged
        for anterior, siguiente in zip(informe.iterates, informe.iterates[1:]):
            assert np.all(siguiente.values >= anterior.values - 1e-12)
        assert informe.residual <= 2e-6
        assert len(informe.deltas) == informe.iteraciones

    def test_iterado_que_decrece_se_conserva_y_se_advierte(self, metrica_servicio, cadena_tres_estados, monkeypatch, caplog):
        # Arrange
        monkeypatch.setattr(
            metrica_servicio, "aplicador", lambda *args, **kwargs: (lambda m: MatrizPseudometrica(m.values / 2))
        )

        # Act
        with caplog.at_level(logging.WARNING, logger="app.servicios.metrica_servicio"):
            informe = metrica_servicio.iterate_to_fixpoint("F", cadena_tres_estados, rejilla(0, 1), 0.5, max_iter=3)

        # Assert
        np.testing.assert_allclose(informe.iterates[1].values, informe.iterates[0].values / 2)
        assert "el iterado decrece" in caplog.text

    def test_funcional_real_no_advierte_descensos(self, metrica_servicio, cadena_tres_estados, caplog):
        # Act
        with caplog.at_level(logging.WARNING, logger="app.servicios.metrica_servicio"):
            metrica_servicio.iterate_to_fixpoint("F", cadena_tres_estados, build_time_grid(0.7, 1e-2, 1), 0.7)

        # Assert
        assert "el iterado decrece" not in caplog.text

    def test_sin_convergencia_no_es_error(self, metrica_servicio, cadena_tres_estados):
        # Act
        informe = metrica_servicio.iterate_to_fixpoint(
            "F", cadena_tres_estados, build_time_grid(0.9, 1e-3, 1), 0.9, epsilon_fix=1e-12, max_iter=1
        )

        # Assert
        assert not informe.converged
        assert informe.iteraciones == 1

    def test_parametros_invalidos(self, metrica_servicio, cadena_uniforme):
        with pytest.raises(ConfiguracionInvalidaError):
            metrica_servicio.iterate_to_fixpoint("F", cadena_uniforme, rejilla(0, 1), 0.5, epsilon_fix=0.0)

    def test_mayor_descuento_da_mayor_punto_fijo(self, metrica_servicio, cadena_tres_estados):
        # Act
        informes = metrica_servicio.discount_sweep(cadena_tres_estados, [0.9, 0.5, 0.7], "F", epsilon_time=1e-2)

        # Assert
        assert [c for c, _ in informes] == [0.5, 0.7, 0.9]
        finales = [informe.final.values for _, informe in informes]
        for menor, mayor in zip(finales, finales[1:]):
            assert np.all(menor <= mayor + 1e-6)


class TestComparaciones:
    def test_orden_entre_funcionales_en_cadenas_aleatorias(self, metrica_servicio):
        generador = np.random.default_rng(17)
        tg = build_time_grid(0.5, 0.2, 1)
        for _ in range(5):
            # Arrange
            modelo = cadena_aleatoria(generador, 3)

            # Act
            delta_bar = metrica_servicio.iterate_to_fixpoint("F", modelo, tg, 0.5).final
            d_bar = metrica_servicio.iterate_to_fixpoint("G", modelo, tg, 0.5, epsilon_fix=1e-9).final
            informe = metrica_servicio.check_ordering(delta_bar, d_bar)

            # Assert
            assert informe.pasa, informe.ubicacion
            assert informe.resumen == "δ̄ ≤ d̄: pass"

    def test_orden_con_matrices_iguales(self, metrica_servicio):
        m = _matriz([[0, 0.3], [0.3, 0]])
        informe = metrica_servicio.check_ordering(m, m)
        assert informe.pasa
        assert informe.violacion_maxima == 0.0

    def test_orden_detecta_violaciones(self, metrica_servicio):
        # Act
        informe = metrica_servicio.check_ordering(_matriz([[0, 0.5], [0.5, 0]]), _matriz([[0, 0.2], [0.2, 0]]))

        # Assert
        assert not informe.pasa
        assert informe.violacion_maxima == pytest.approx(0.3)
        assert informe.resumen == "δ̄ ≤ d̄: fail"

    def test_orden_usa_el_ruido_de_muestreo_como_tolerancia(self, metrica_servicio):
        # Arrange
        ruidosa = MatrizPseudometrica(np.array([[0, 0.45], [0.45, 0]]), ruido_muestreo=0.1)

        # Act
        informe = metrica_servicio.check_ordering(_matriz([[0, 0.5], [0.5, 0]]), ruidosa)

        # Assert
        assert informe.pasa
        assert informe.tolerancia == 0.1

    def test_transferencia_de_punto_fijo(self, metrica_servicio, cadena_tres_estados):
        # Arrange
        tg = build_time_grid(0.5, 0.2, 1)
        d_bar = metrica_servicio.iterate_to_fixpoint("G", cadena_tres_estados, tg, 0.5, epsilon_fix=1e-8).final

        # Act
        chequeo = metrica_servicio.check_fixpoint_transfer(d_bar, cadena_tres_estados, tg, 0.5)

        # Assert
        assert chequeo.pasa, chequeo.detalle

    def test_menor_punto_fijo(self, metrica_servicio, cadena_tres_estados):
        # Arrange
        tg = build_time_grid(0.5, 0.2, 1)
        delta_bar = metrica_servicio.iterate_to_fixpoint("F", cadena_tres_estados, tg, 0.5).final
        discreta = _matriz(1.0 - np.eye(3))

        # Act
        chequeo = metrica_servicio.check_least_fixpoint(delta_bar, discreta, cadena_tres_estados, tg, 0.5)

        # Assert
        assert chequeo.pasa

    def test_menor_punto_fijo_exige_un_prefijo(self, metrica_servicio, cadena_tres_estados):
        tg = rejilla(0, 1)
        with pytest.raises(PrecondicionFallidaError):
            metrica_servicio.check_least_fixpoint(
                MatrizPseudometrica.cero(3), MatrizPseudometrica.cero(3), cadena_tres_estados, tg, 0.5
            )


class TestMonteCarlo:
    def test_ruido_de_muestreo(self, metrica_servicio, cadena_tres_estados):
        # Arrange
        modo = ModoTrayectorias.monte_carlo(300, 11)
        tg = rejilla(0, 1, 2)

        # Act
        informe = metrica_servicio.iterate_to_fixpoint("G", cadena_tres_estados, tg, 0.5, path_mode=modo)
        delta_bar = metrica_servicio.iterate_to_fixpoint("F", cadena_tres_estados, tg, 0.5).final

        # Assert
        assert informe.ruido_muestreo > 0.0
        assert informe.configuracion["path_mode"] == "mc:300"
        assert metrica_servicio.check_ordering(delta_bar, informe.final, tol=0.1).pasa

    def test_misma_semilla_mismo_resultado(self, metrica_servicio, cadena_tres_estados):
        # Arrange
        modo = ModoTrayectorias.monte_carlo(100, 4)
        m = metrica_servicio.obs_metric(cadena_tres_estados)
        tg = rejilla(0, 1, 2)

        # Act
        a = metrica_servicio.apply_G(m, cadena_tres_estados, tg, 0.5, modo)
        b = metrica_servicio.apply_G(m, cadena_tres_estados, tg, 0.5, modo)

        # Assert
        np.testing.assert_array_equal(a.values, b.values)


class TestSensibilidadAlPaso:
    def test_cadena_no_admite_el_paso_refinado(self, metrica_servicio, cadena_tres_estados):
        with pytest.raises(PrecondicionFallidaError):
            metrica_servicio.step_sensitivity("F", cadena_tres_estados, 0.5, epsilon_time=0.1)

    def test_browniano_refinado(self, metrica_servicio, modelo_browniano_pequeno):
        # Act
        sensibilidad = metrica_servicio.step_sensitivity("F", modelo_browniano_pequeno, 0.5, epsilon_time=0.1)

        # Assert
        assert 0.0 <= sensibilidad <= 1.0
