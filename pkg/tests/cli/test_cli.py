# tests/cli/test_cli.py
import csv
import json

import pytest

from app.cli.cli import ejecutar
from app.cli.middlewares.manejador_excepciones import (
    SALIDA_INTERNA,
    SALIDA_INVARIANTE,
    SALIDA_OK,
    SALIDA_USO,
    codigo_salida,
)
from app.dominio.excepciones.dominio_excepciones import (
    ConfiguracionInvalidaError,
    HonestidadError,
    TransporteError,
)

CADENA_TRES_ESTADOS = {
    "process": {
        "kind": "finite-chain",
        "matrix": [[0.6, 0.4, 0.0], [0.2, 0.5, 0.3], [0.0, 0.3, 0.7]],
        "labels": ["bajo", "medio", "alto"],
        "observable": {"values": [0, 0.5, 1]},
    },
    "discount": 0.5,
    "tolerances": {"epsilon_time": 0.2, "epsilon_fixpoint": 1e-9, "max_iter": 200},
    "functional": "both",
    "logic": {"logic": "lambda", "max_depth": 2},
}


@pytest.fixture
def ruta_config(tmp_path):
    ruta = tmp_path / "config.json"
    ruta.write_text(json.dumps(CADENA_TRES_ESTADOS), encoding="utf-8")
    return ruta


def _leer_csv(ruta):
    with ruta.open(encoding="utf-8") as archivo:
        return list(csv.reader(archivo))


@pytest.mark.parametrize(
    "excepcion, codigo",
    [
        (ConfiguracionInvalidaError("x"), SALIDA_USO),
        (HonestidadError("M", 0.9), SALIDA_INVARIANTE),
        (TransporteError("x"), SALIDA_INTERNA),
        (ValueError("x"), SALIDA_INTERNA),
    ],
)
def test_codigo_salida(excepcion, codigo):
    assert codigo_salida(excepcion) == codigo


class TestMetric:
    def test_escribe_los_artefactos(self, ruta_config, tmp_path):
        # Arrange
        salida = tmp_path / "salida"

        # Act
        codigo = ejecutar(["metric", "--config", str(ruta_config), "--out-dir", str(salida)])

        # Assert
        assert codigo == SALIDA_OK
        informe_f = json.loads((salida / "punto_fijo_F.json").read_text(encoding="utf-8"))
        assert informe_f["converged"]
        assert informe_f["etiquetas"] == ["bajo", "medio", "alto"]
        assert _leer_csv(salida / "matriz_G.csv")[0] == ["", "bajo", "medio", "alto"]
        assert _leer_csv(salida / "convergencia_F.csv")[0] == ["iteration", "delta"]
        orden = json.loads((salida / "orden.json").read_text(encoding="utf-8"))
        assert orden["resumen"] == "δ̄ ≤ d̄: pass"

    def test_artefactos_identicos_entre_ejecuciones(self, ruta_config, tmp_path):
        # Act
        for nombre in ("a", "b"):
            assert ejecutar(["metric", "--config", str(ruta_config), "--out-dir", str(tmp_path / nombre)]) == 0

        # Assert
        for archivo in ("punto_fijo_F.json", "punto_fijo_G.json", "matriz_F.csv", "orden.json"):
            assert (tmp_path / "a" / archivo).read_bytes() == (tmp_path / "b" / archivo).read_bytes()

    def test_flags_sobrescriben_el_documento(self, ruta_config, tmp_path):
        # Act
        codigo = ejecutar(
            ["metric", "--config", str(ruta_config), "--out-dir", str(tmp_path), "--functional", "F", "--discount", "0.3"]
        )

        # Assert
        assert codigo == SALIDA_OK
        assert not (tmp_path / "punto_fijo_G.json").exists()
        informe = json.loads((tmp_path / "punto_fijo_F.json").read_text(encoding="utf-8"))
        assert informe["configuracion"]["c"] == 0.3

    def test_descuento_uno_es_error_de_uso(self, ruta_config, tmp_path):
        assert ejecutar(["metric", "--config", str(ruta_config), "--out-dir", str(tmp_path), "--discount", "1"]) == SALIDA_USO

    def test_monte_carlo_sin_semilla_es_error_de_uso(self, ruta_config, tmp_path):
        codigo = ejecutar(["metric", "--config", str(ruta_config), "--out-dir", str(tmp_path), "--path-mode", "mc:10"])
        assert codigo == SALIDA_USO

    def test_filas_que_no_suman_uno(self, tmp_path):
        # Arrange
        documento = json.loads(json.dumps(CADENA_TRES_ESTADOS))
        documento["process"]["matrix"][0] = [0.5, 0.4, 0.0]
        ruta = tmp_path / "deshonesta.json"
        ruta.write_text(json.dumps(documento), encoding="utf-8")

        # Act / Assert
        assert ejecutar(["metric", "--config", str(ruta), "--out-dir", str(tmp_path / "salida")]) == SALIDA_INVARIANTE

    def test_subcomando_desconocido(self):
        assert ejecutar(["medir"]) == SALIDA_USO

    def test_sensibilidad_al_paso_omitida_en_cadenas(self, ruta_config, tmp_path):
        # Act
        codigo = ejecutar(
            ["metric", "--config", str(ruta_config), "--out-dir", str(tmp_path), "--functional", "F", "--step-sensitivity"]
        )

        # Assert
        assert codigo == SALIDA_OK
        informe = json.loads((tmp_path / "punto_fijo_F.json").read_text(encoding="utf-8"))
        assert informe["sensibilidad_paso"] is None


class TestLogic:
    def test_busqueda_y_brecha(self, ruta_config, tmp_path):
        # Arrange
        assert ejecutar(["metric", "--config", str(ruta_config), "--out-dir", str(tmp_path), "--functional", "F"]) == 0

        # Act
        codigo = ejecutar(
            [
                "logic", "--config", str(ruta_config), "--out-dir", str(tmp_path),
                "--fixpoint", str(tmp_path / "punto_fijo_F.json"),
            ]
        )

        # Assert
        assert codigo == SALIDA_OK
        testigos = json.loads((tmp_path / "testigos_lambda.json").read_text(encoding="utf-8"))
        assert testigos["exacta"]
        assert len(testigos["testigos"]) == 3
        assert testigos["brecha"]["excede_punto_fijo"] <= 1e-6
        assert _leer_csv(tmp_path / "estimacion_lambda.csv")[0] == ["", "bajo", "medio", "alto"]

    def test_evalua_un_archivo_de_formulas(self, ruta_config, tmp_path):
        # Arrange
        formulas = tmp_path / "formulas.txt"
        formulas.write_text("# comentario\nobs\n1/2\n<1> obs\n", encoding="utf-8")

        # Act
        codigo = ejecutar(
            ["logic", "--config", str(ruta_config), "--out-dir", str(tmp_path), "--formulas", str(formulas), "--no-search"]
        )

        # Assert
        assert codigo == SALIDA_OK
        filas = _leer_csv(tmp_path / "evaluacion.csv")
        assert filas[0] == ["formula", "bajo", "medio", "alto"]
        assert filas[1][1:] == ["0", "0.5", "1"]
        assert filas[2][1:] == ["0.5", "0.5", "0.5"]
        assert not (tmp_path / "testigos_lambda.json").exists()

    def test_formula_mal_escrita(self, ruta_config, tmp_path):
        # Arrange
        formulas = tmp_path / "formulas.txt"
        formulas.write_text("obs +\n", encoding="utf-8")

        # Act / Assert
        codigo = ejecutar(
            ["logic", "--config", str(ruta_config), "--out-dir", str(tmp_path), "--formulas", str(formulas), "--no-search"]
        )
        assert codigo == SALIDA_USO

    def test_no_search_sin_formulas(self, ruta_config, tmp_path):
        assert ejecutar(["logic", "--config", str(ruta_config), "--out-dir", str(tmp_path), "--no-search"]) == SALIDA_USO


class TestValidateYSweep:
    def test_validate_supera_la_bateria(self, ruta_config, tmp_path, capsys):
        # Act
        codigo = ejecutar(["validate", "--config", str(ruta_config), "--out-dir", str(tmp_path)])

        # Assert
        assert codigo == SALIDA_OK
        informe = json.loads((tmp_path / "validacion.json").read_text(encoding="utf-8"))
        assert informe["pasa"]
        assert informe["violaciones"] == []
        assert "chequeos superados" in capsys.readouterr().out

    def test_validate_informa_la_deshonestidad(self, tmp_path):
        # Arrange
        documento = json.loads(json.dumps(CADENA_TRES_ESTADOS))
        documento["process"]["matrix"][2] = [0.0, 0.3, 0.8]
        ruta = tmp_path / "deshonesta.json"
        ruta.write_text(json.dumps(documento), encoding="utf-8")

        # Act
        codigo = ejecutar(["validate", "--config", str(ruta), "--out-dir", str(tmp_path / "salida")])

        # Assert
        assert codigo == SALIDA_INVARIANTE
        informe = json.loads((tmp_path / "salida" / "validacion.json").read_text(encoding="utf-8"))
        assert not informe["pasa"]

    def test_sweep_es_monotono_en_c(self, ruta_config, tmp_path):
        # Act
        codigo = ejecutar(
            [
                "sweep", "--config", str(ruta_config), "--out-dir", str(tmp_path),
                "--functional", "F", "--discounts", "0.7", "0.3", "0.5",
            ]
        )

        # Assert
        assert codigo == SALIDA_OK
        filas = _leer_csv(tmp_path / "sweep.csv")
        assert filas[0] == ["functional", "c", "x", "y", "value"]
        valores = [float(f[4]) for f in filas[1:] if f[2:4] == ["bajo", "alto"]]
        assert [float(f[1]) for f in filas[1:] if f[2:4] == ["bajo", "alto"]] == [0.3, 0.5, 0.7]
        assert valores == sorted(valores)

    def test_sweep_sin_descuentos(self, ruta_config, tmp_path):
        assert ejecutar(["sweep", "--config", str(ruta_config), "--out-dir", str(tmp_path)]) == SALIDA_USO
