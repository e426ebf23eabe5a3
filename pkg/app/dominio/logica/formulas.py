# app/dominio/logica/formulas.py
"""
Árboles de sintaxis de las lógicas de valores reales.

- Λ (fórmulas de estado): q | obs | min{f1, f2} | 1 − f | f ⊖ q | ⟨t⟩ f
- L_σ (fórmulas de estado): q | obs | 1 − f | ∫ g
- L_τ (fórmulas de trayectoria): f ∘ ev_t | min{g1, g2} | max{g1, g2} | g ⊖ q | g ⊕ q

Los nodos son dataclasses inmutables y hashables; la evaluación guarda en
caché los valores por fórmula.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from app.dominio.excepciones.dominio_excepciones import (
    ConstanteFueraDeRangoError,
    FormulaError,
    GramaticaMezcladaError,
)


def _constante(valor) -> Fraction:
    """Racional en [0, 1]; los float se leen por su representación decimal."""
    racional = Fraction(repr(valor)) if isinstance(valor, float) else Fraction(valor)
    if not 0 <= racional <= 1:
        raise ConstanteFueraDeRangoError(valor)
    return racional


def _tiempo(valor) -> Fraction:
    racional = Fraction(repr(valor)) if isinstance(valor, float) else Fraction(valor)
    if racional < 0:
        raise ConstanteFueraDeRangoError(valor, "[0, ∞)")
    return racional


# --- Fórmulas de estado ---

@dataclass(frozen=True, slots=True)
class Const:
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", _constante(self.q))


@dataclass(frozen=True, slots=True)
class Obs:
    pass


@dataclass(frozen=True, slots=True)
class Min:
    f1: "FormulaEstado"
    f2: "FormulaEstado"

    def __post_init__(self):
        _exige_estado(self.f1, self.f2)
        _exige_gramatica(self, Gramatica.LAMBDA)


@dataclass(frozen=True, slots=True)
class Neg:
    f: "FormulaEstado"

    def __post_init__(self):
        _exige_estado(self.f)


@dataclass(frozen=True, slots=True)
class MinusQ:
    f: "FormulaEstado"
    q: Fraction

    def __post_init__(self):
        _exige_estado(self.f)
        object.__setattr__(self, "q", _constante(self.q))
        _exige_gramatica(self, Gramatica.LAMBDA)


@dataclass(frozen=True, slots=True)
class Diamond:
    t: Fraction
    f: "FormulaEstado"

    def __post_init__(self):
        _exige_estado(self.f)
        object.__setattr__(self, "t", _tiempo(self.t))
        _exige_gramatica(self, Gramatica.LAMBDA)


@dataclass(frozen=True, slots=True)
class IntegralPath:
    g: "FormulaTrayectoria"

    def __post_init__(self):
        if not isinstance(self.g, NODOS_TRAYECTORIA):
            raise FormulaError(f"'int' espera una fórmula de trayectoria y recibió {type(self.g).__name__}")
        _exige_gramatica(self, Gramatica.SIGMA)


# --- Fórmulas de trayectoria (L_τ) ---

@dataclass(frozen=True, slots=True)
class Eval:
    f: "FormulaEstado"
    t: Fraction

    def __post_init__(self):
        _exige_estado(self.f)
        object.__setattr__(self, "t", _tiempo(self.t))


@dataclass(frozen=True, slots=True)
class TrajMin:
    g1: "FormulaTrayectoria"
    g2: "FormulaTrayectoria"

    def __post_init__(self):
        _exige_trayectoria(self.g1, self.g2)
        gramatica(self)


@dataclass(frozen=True, slots=True)
class TrajMax:
    g1: "FormulaTrayectoria"
    g2: "FormulaTrayectoria"

    def __post_init__(self):
        _exige_trayectoria(self.g1, self.g2)
        gramatica(self)


@dataclass(frozen=True, slots=True)
class TrajMinusQ:
    g: "FormulaTrayectoria"
    q: Fraction

    def __post_init__(self):
        _exige_trayectoria(self.g)
        object.__setattr__(self, "q", _constante(self.q))


@dataclass(frozen=True, slots=True)
class TrajPlusQ:
    g: "FormulaTrayectoria"
    q: Fraction

    def __post_init__(self):
        _exige_trayectoria(self.g)
        object.__setattr__(self, "q", _constante(self.q))


FormulaEstado = Union[Const, Obs, Min, Neg, MinusQ, Diamond, IntegralPath]
FormulaTrayectoria = Union[Eval, TrajMin, TrajMax, TrajMinusQ, TrajPlusQ]
Formula = Union[FormulaEstado, FormulaTrayectoria]

NODOS_ESTADO = (Const, Obs, Min, Neg, MinusQ, Diamond, IntegralPath)
NODOS_TRAYECTORIA = (Eval, TrajMin, TrajMax, TrajMinusQ, TrajPlusQ)


def _exige_estado(*formulas) -> None:
    for formula in formulas:
        if not isinstance(formula, NODOS_ESTADO):
            raise FormulaError(f"Se esperaba una fórmula de estado y se recibió {type(formula).__name__}")


def _exige_trayectoria(*formulas) -> None:
    for formula in formulas:
        if not isinstance(formula, NODOS_TRAYECTORIA):
            raise FormulaError(f"Se esperaba una fórmula de trayectoria y se recibió {type(formula).__name__}")


# --- Gramáticas ---

class Gramatica(str, Enum):
    COMUN = "comun"     # solo constantes, obs y negación
    LAMBDA = "lambda"
    SIGMA = "sigma"


def hijos(formula: Formula) -> tuple:
    """Subfórmulas inmediatas de un nodo."""
    if isinstance(formula, (Const, Obs)):
        return ()
    if isinstance(formula, (Min,)):
        return (formula.f1, formula.f2)
    if isinstance(formula, (TrajMin, TrajMax)):
        return (formula.g1, formula.g2)
    if isinstance(formula, (Neg, MinusQ, Diamond, Eval)):
        return (formula.f,)
    return (formula.g,)


def gramatica(formula: Formula) -> Gramatica:
    """Gramática a la que pertenece la fórmula; GramaticaMezcladaError si usa ambas."""
    propia = Gramatica.COMUN
    if isinstance(formula, (Min, MinusQ, Diamond)):
        propia = Gramatica.LAMBDA
    elif isinstance(formula, IntegralPath):
        propia = Gramatica.SIGMA
    for hijo in hijos(formula):
        propia = _combinar(propia, gramatica(hijo))
    return propia


def _combinar(a: Gramatica, b: Gramatica) -> Gramatica:
    if a == Gramatica.COMUN:
        return b
    if b == Gramatica.COMUN or a == b:
        return a
    raise GramaticaMezcladaError(
        "la fórmula combina nodos de Λ (min, ⊖, <t>) con la integral de trayectorias de L_σ"
    )


def _exige_gramatica(formula: Formula, esperada: Gramatica) -> None:
    if gramatica(formula) not in (esperada, Gramatica.COMUN):
        raise GramaticaMezcladaError()


def formula_depth(formula: Formula) -> int:
    """Altura del árbol: Const y Obs tienen profundidad 1."""
    return 1 + max((formula_depth(h) for h in hijos(formula)), default=0)


# --- Operadores derivados ---

def max_f(f1: FormulaEstado, f2: FormulaEstado) -> FormulaEstado:
    """max{f1, f2} = 1 − min{1 − f1, 1 − f2} en Λ."""
    return Neg(Min(Neg(f1), Neg(f2)))


def plus_q(f: FormulaEstado, q) -> FormulaEstado:
    """f ⊕ q = 1 − ((1 − f) ⊖ q) en Λ."""
    return Neg(MinusQ(Neg(f), q))


def sigma_minus_q(f: FormulaEstado, q) -> FormulaEstado:
    """f ⊖ q = ∫[(f ∘ ev_0) ⊖ q] en L_σ."""
    return IntegralPath(TrajMinusQ(Eval(f, 0), q))


def sigma_plus_q(f: FormulaEstado, q) -> FormulaEstado:
    return IntegralPath(TrajPlusQ(Eval(f, 0), q))


def sigma_min(f1: FormulaEstado, f2: FormulaEstado) -> FormulaEstado:
    """min{f1, f2} = ∫ min{f1 ∘ ev_0, f2 ∘ ev_0} en L_σ."""
    return IntegralPath(TrajMin(Eval(f1, 0), Eval(f2, 0)))


def sigma_max(f1: FormulaEstado, f2: FormulaEstado) -> FormulaEstado:
    return IntegralPath(TrajMax(Eval(f1, 0), Eval(f2, 0)))


# --- Sintaxis concreta ---

def texto_racional(valor: Fraction) -> str:
    if valor.denominator == 1:
        return str(valor.numerator)
    return f"{valor.numerator}/{valor.denominator}"


def _operando_prefijo(formula: Formula) -> str:
    texto = format_formula(formula)
    if isinstance(formula, (MinusQ, TrajMinusQ, TrajPlusQ)):
        return f"({texto})"
    return texto


def _operando_postfijo(formula: Formula) -> str:
    texto = format_formula(formula)
    if isinstance(formula, (Const, Obs, Min)):
        return texto
    return f"({texto})"


def format_formula(formula: Formula) -> str:
    """Texto en la sintaxis concreta; el parser lo vuelve a leer como el mismo árbol."""
    if isinstance(formula, Const):
        return texto_racional(formula.q)
    if isinstance(formula, Obs):
        return "obs"
    if isinstance(formula, Min):
        return f"min({format_formula(formula.f1)}, {format_formula(formula.f2)})"
    if isinstance(formula, Neg):
        return f"1 - {_operando_prefijo(formula.f)}"
    if isinstance(formula, MinusQ):
        return f"{format_formula(formula.f)} (-) {texto_racional(formula.q)}"
    if isinstance(formula, Diamond):
        return f"<{texto_racional(formula.t)}> {_operando_prefijo(formula.f)}"
    if isinstance(formula, IntegralPath):
        return f"int {_operando_prefijo(formula.g)}"
    if isinstance(formula, Eval):
        return f"{_operando_postfijo(formula.f)} @ {texto_racional(formula.t)}"
    if isinstance(formula, TrajMin):
        return f"min({format_formula(formula.g1)}, {format_formula(formula.g2)})"
    if isinstance(formula, TrajMax):
        return f"max({format_formula(formula.g1)}, {format_formula(formula.g2)})"
    if isinstance(formula, TrajMinusQ):
        return f"{format_formula(formula.g)} (-) {texto_racional(formula.q)}"
    if isinstance(formula, TrajPlusQ):
        return f"{format_formula(formula.g)} (+) {texto_racional(formula.q)}"
    raise FormulaError(f"Nodo de fórmula desconocido: {type(formula).__name__}")


def tiempos_de(formula: Formula) -> set[Fraction]:
    """Tiempos que aparecen en nodos Diamond o Eval."""
    propios = {formula.t} if isinstance(formula, (Diamond, Eval)) else set()
    for hijo in hijos(formula):
        propios |= tiempos_de(hijo)
    return propios
