# tests/infraestructura/logica/test_parser_formulas.py
from fractions import Fraction

import pytest

from app.dominio.excepciones.dominio_excepciones import (
    ConstanteFueraDeRangoError,
    GramaticaMezcladaError,
    SintaxisFormulaError,
)
from app.dominio.logica.formulas import (
    Const,
    Diamond,
    Eval,
    IntegralPath,
    Min,
    MinusQ,
    Neg,
    Obs,
    TrajMin,
    TrajMinusQ,
    TrajPlusQ,
    format_formula,
    max_f,
    plus_q,
    sigma_max,
    sigma_minus_q,
)
from app.infraestructura.logica.parser_formulas import ParserFormulas


@pytest.fixture
def parser():
    return ParserFormulas()


@pytest.mark.parametrize(
    "texto, esperada",
    [
        ("obs", Obs()),
        ("0.25", Const(Fraction(1, 4))),
        ("1 - obs", Neg(Obs())),
        ("1 - 1 - obs", Neg(Neg(Obs()))),
        ("<1/2> obs", Diamond(Fraction(1, 2), Obs())),
        ("<1> obs (-) 1/4", MinusQ(Diamond(1, Obs()), Fraction(1, 4))),
        ("min(obs, <2> (1 - obs))", Min(Obs(), Diamond(2, Neg(Obs())))),
        ("max(obs, 1/2)", max_f(Obs(), Const(Fraction(1, 2)))),
        ("obs (+) 1/4", plus_q(Obs(), Fraction(1, 4))),
    ],
)
def test_parse_lambda(parser, texto, esperada):
    assert parser.parse(texto) == esperada


@pytest.mark.parametrize(
    "texto, esperada",
    [
        ("int (obs @ 1)", IntegralPath(Eval(Obs(), 1))),
        ("int obs @ 1", IntegralPath(Eval(Obs(), 1))),
        ("int min(obs @ 0, (1 - obs) @ 1)", IntegralPath(TrajMin(Eval(Obs(), 0), Eval(Neg(Obs()), 1)))),
        ("int (obs @ 1 (+) 1/2)", IntegralPath(TrajPlusQ(Eval(Obs(), 1), Fraction(1, 2)))),
        ("int (obs @ 0 (-) 1/4)", IntegralPath(TrajMinusQ(Eval(Obs(), 0), Fraction(1, 4)))),
    ],
)
def test_parse_sigma(parser, texto, esperada):
    assert parser.parse(texto) == esperada


def test_operadores_de_estado_en_sigma_se_expanden_con_integrales(parser):
    # Arrange
    integral = IntegralPath(Eval(Obs(), 1))

    # Act / Assert
    assert parser.parse("int (obs @ 1) (-) 1/4") == sigma_minus_q(integral, Fraction(1, 4))
    assert parser.parse("max(obs, int (obs @ 1))") == sigma_max(Obs(), integral)


def test_format_y_parse_son_inversos(parser):
    textos = [
        "min(obs, <2> (1 - obs))",
        "1 - (obs (-) 1/4)",
        "<1/2> (<1> obs (-) 1/3)",
        "int max(obs @ 0, (1 - obs) @ 3/2)",
        "1 - int min(obs @ 0, 1/2 @ 1)",
    ]
    for texto in textos:
        formula = parser.parse(texto)
        assert parser.parse(format_formula(formula)) == formula


@pytest.mark.parametrize("texto", ["obs +", "min(obs)", "<> obs", "1/2 - obs", "int obs", "<1> (obs @ 1)"])
def test_errores_de_sintaxis(parser, texto):
    with pytest.raises(SintaxisFormulaError):
        parser.parse(texto)


def test_gramatica_mezclada(parser):
    with pytest.raises(GramaticaMezcladaError):
        parser.parse("<1> int (obs @ 0)")


def test_constante_fuera_de_rango(parser):
    with pytest.raises(ConstanteFueraDeRangoError):
        parser.parse("min(obs, 3/2)")


def test_parse_lineas_ignora_comentarios_y_blancos(parser):
    # Arrange
    contenido = "# cabecera\n\nobs\n<1> obs  # con comentario\n"

    # Act
    formulas = parser.parse_lineas(contenido)

    # Assert
    assert formulas == [(3, Obs()), (4, Diamond(1, Obs()))]


def test_parse_lineas_informa_la_linea_del_error(parser):
    # Act
    with pytest.raises(SintaxisFormulaError) as info:
        parser.parse_lineas("obs\n\nmin(obs,\n")

    # Assert
    assert info.value.linea == 3
    assert "línea 3" in str(info.value)
