# app/infraestructura/logica/parser_formulas.py
"""
Parser de la sintaxis concreta de las fórmulas, construido con lark.

Sintaxis:
    <t> f          diamante ⟨t⟩ f
    f (-) q        f ⊖ q
    f (+) q        f ⊕ q
    min(f, g)      mínimo (estado o trayectoria)
    max(f, g)      máximo (estado o trayectoria)
    1 - f          negación
    obs            observable
    p/q, 0.25      constantes racionales
    f @ t          f ∘ ev_t
    int g          ∫ g

En una fórmula de L_σ los operadores de estado min, max, (-) y (+) se
expanden en sus formas derivadas con integrales; en Λ, max y (+) se expanden
con la negación.
"""
import logging
from fractions import Fraction
from typing import Union

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedInput

from app.dominio.excepciones.dominio_excepciones import (
    FormulaError,
    GramaticaMezcladaError,
    SintaxisFormulaError,
)
from app.dominio.logica.formulas import (
    NODOS_ESTADO,
    NODOS_TRAYECTORIA,
    Const,
    Diamond,
    Eval,
    Formula,
    Gramatica,
    IntegralPath,
    Min,
    MinusQ,
    Neg,
    Obs,
    TrajMax,
    TrajMin,
    TrajMinusQ,
    TrajPlusQ,
    max_f,
    plus_q,
    sigma_max,
    sigma_min,
    sigma_minus_q,
    sigma_plus_q,
)

logger = logging.getLogger(__name__)

GRAMATICA = r'''
?start: expr

?expr: expr "(-)" NUM          -> minusq
     | expr "(+)" NUM          -> plusq
     | unary

?unary: NUM "-" unary          -> neg
      | "<" NUM ">" unary      -> diamond
      | "int" unary            -> integral
      | postfix

?postfix: atom "@" NUM         -> eval
        | atom

?atom: NUM                     -> const
     | "obs"                   -> obs
     | "min" "(" expr "," expr ")"  -> min
     | "max" "(" expr "," expr ")"  -> max
     | "(" expr ")"

NUM: /\d+\/\d+/ | /\d+(?:\.\d+)?/

%import common.WS
%ignore WS
'''


class ParserFormulas:
    """Traduce texto a árboles de fórmulas del dominio."""

    def __init__(self):
        self.parser = Lark(GRAMATICA, parser="lalr", propagate_positions=True)

    def parse(self, texto: str) -> Formula:
        """
        Lee una fórmula.

        Raises:
            SintaxisFormulaError: Si el texto no respeta la sintaxis o mezcla sortes.
            GramaticaMezcladaError: Si usa '<t>' e 'int' a la vez.
            ConstanteFueraDeRangoError: Si una constante no está en [0, 1].
        """
        try:
            arbol = self.parser.parse(texto)
        except UnexpectedInput as e:
            raise SintaxisFormulaError(
                texto,
                posicion=getattr(e, "column", None),
                linea=None,
                detalle=type(e).__name__,
            ) from e

        gramatica = self._gramatica(arbol)
        return _Traductor(texto, gramatica).traducir(arbol)

    def parse_lineas(self, contenido: str) -> list[tuple[int, Formula]]:
        """
        Lee un archivo de fórmulas: una por línea, con comentarios '#'.

        Returns:
            Lista de (número de línea, fórmula).
        """
        formulas = []
        for numero, linea in enumerate(contenido.splitlines(), start=1):
            texto = linea.split("#", 1)[0].strip()
            if not texto:
                continue
            try:
                formulas.append((numero, self.parse(texto)))
            except SintaxisFormulaError as e:
                raise SintaxisFormulaError(texto, posicion=e.posicion, linea=numero, detalle=e.detalle) from e
            except FormulaError as e:
                e.linea = numero
                e.__notes__ = [f"Línea {numero}: {texto}"]
                raise
        logger.debug(f"Leídas {len(formulas)} fórmulas")
        return formulas

    @staticmethod
    def _gramatica(arbol) -> Gramatica:
        if not isinstance(arbol, Tree):
            return Gramatica.COMUN
        usa_diamante = any(True for _ in arbol.find_data("diamond"))
        usa_integral = any(True for _ in arbol.find_data("integral"))
        if usa_diamante and usa_integral:
            raise GramaticaMezcladaError()
        if usa_integral:
            return Gramatica.SIGMA
        return Gramatica.LAMBDA


class _Traductor:
    """Recorre el árbol de lark y construye los nodos del dominio."""

    def __init__(self, texto: str, gramatica: Gramatica):
        self.texto = texto
        self.gramatica = gramatica

    def traducir(self, nodo: Union[Tree, Token]) -> Formula:
        if isinstance(nodo, Token):
            return self._constante(nodo)
        metodo = getattr(self, f"_{nodo.data}")
        return metodo(nodo, *nodo.children)

    # --- Hojas ---

    def _racional(self, token: Token) -> Fraction:
        try:
            return Fraction(str(token))
        except (ValueError, ZeroDivisionError):
            raise SintaxisFormulaError(self.texto, posicion=token.column, detalle=f"número inválido '{token}'") from None

    def _constante(self, token: Token) -> Const:
        return Const(self._racional(token))

    def _const(self, nodo, token):
        return self._constante(token)

    def _obs(self, nodo):
        return Obs()

    # --- Operadores ---

    def _neg(self, nodo, uno, operando):
        if self._racional(uno) != 1:
            raise SintaxisFormulaError(self.texto, posicion=uno.column, detalle="la negación se escribe '1 - f'")
        return Neg(self._estado(operando, "1 - f"))

    def _diamond(self, nodo, tiempo, operando):
        return Diamond(self._racional(tiempo), self._estado(operando, "<t> f"))

    def _integral(self, nodo, operando):
        g = self.traducir(operando)
        if not isinstance(g, NODOS_TRAYECTORIA):
            raise self._error(nodo, "'int' requiere una fórmula de trayectoria (use 'f @ t')")
        return IntegralPath(g)

    def _eval(self, nodo, operando, tiempo):
        return Eval(self._estado(operando, "f @ t"), self._racional(tiempo))

    def _min(self, nodo, a, b):
        return self._binario(nodo, a, b, TrajMin, sigma_min if self._es_sigma else Min)

    def _max(self, nodo, a, b):
        return self._binario(nodo, a, b, TrajMax, sigma_max if self._es_sigma else max_f)

    def _minusq(self, nodo, operando, q):
        return self._con_constante(nodo, operando, q, TrajMinusQ, sigma_minus_q if self._es_sigma else MinusQ)

    def _plusq(self, nodo, operando, q):
        return self._con_constante(nodo, operando, q, TrajPlusQ, sigma_plus_q if self._es_sigma else plus_q)

    # --- Auxiliares ---

    @property
    def _es_sigma(self) -> bool:
        return self.gramatica == Gramatica.SIGMA

    def _estado(self, nodo, operador: str):
        f = self.traducir(nodo)
        if not isinstance(f, NODOS_ESTADO):
            raise self._error(nodo, f"'{operador}' requiere una fórmula de estado")
        return f

    def _binario(self, nodo, a, b, de_trayectoria, de_estado):
        f, g = self.traducir(a), self.traducir(b)
        if isinstance(f, NODOS_TRAYECTORIA) and isinstance(g, NODOS_TRAYECTORIA):
            return de_trayectoria(f, g)
        if isinstance(f, NODOS_ESTADO) and isinstance(g, NODOS_ESTADO):
            return de_estado(f, g)
        raise self._error(nodo, "no se pueden combinar fórmulas de estado y de trayectoria")

    def _con_constante(self, nodo, operando, q, de_trayectoria, de_estado):
        f = self.traducir(operando)
        constante = self._racional(q)
        if isinstance(f, NODOS_TRAYECTORIA):
            return de_trayectoria(f, constante)
        return de_estado(f, constante)

    def _error(self, nodo, detalle: str) -> SintaxisFormulaError:
        columna = getattr(getattr(nodo, "meta", None), "column", None) if isinstance(nodo, Tree) else nodo.column
        return SintaxisFormulaError(self.texto, posicion=columna, detalle=detalle)


# Instancia compartida: el parser LALR es inmutable tras construirse.
parser_formulas = ParserFormulas()


def parse(texto: str) -> Formula:
    return parser_formulas.parse(texto)
