# app/dominio/entidades/informes.py
from dataclasses import dataclass, field
from typing import Any, Optional

from app.dominio.logica.formulas import Formula
from app.dominio.objetos_valor.matriz_pseudometrica import MatrizPseudometrica


@dataclass(frozen=True)
class InformeDualidad:
    """Resultado de comprobar la dualidad de Kantorovich sobre un ResultadoTransporte."""
    valido: bool
    brecha: float
    violacion_lipschitz: float
    desviacion_marginal: float
    desviacion_costo: float


@dataclass(frozen=True)
class InformeLimiteWasserstein:
    """Sucesión W(c_k)(μ, ν) frente al valor límite W(c)(μ, ν)."""
    valores: tuple[float, ...]
    valor_limite: float
    monotona: bool
    brecha_final: float
    converge: bool


@dataclass(frozen=True)
class InformeOrden:
    """Comparación entrada a entrada de dos pseudométricas (menor ≤ mayor)."""
    pasa: bool
    violacion_maxima: float
    ubicacion: Optional[tuple[int, int]]
    tolerancia: float

    @property
    def resumen(self) -> str:
        estado = "pass" if self.pasa else "fail"
        return f"δ̄ ≤ d̄: {estado}"


@dataclass
class InformePuntoFijo:
    """
    Iteración δ_0 ≤ δ_1 ≤ … de un funcional hasta el punto fijo.

    `residual` es la norma del supremo de F(final) − final; `deltas[k]` es el
    cambio entre los iterados k y k+1.
    """
    funcional: str
    iterates: list[MatrizPseudometrica]
    deltas: list[float]
    residual: float
    converged: bool
    configuracion: dict[str, Any] = field(default_factory=dict)
    ruido_muestreo: float = 0.0
    sensibilidad_paso: Optional[float] = None

    @property
    def final(self) -> MatrizPseudometrica:
        return self.iterates[-1]

    @property
    def iteraciones(self) -> int:
        return len(self.iterates) - 1


@dataclass(frozen=True)
class Chequeo:
    """Una comprobación de la batería de validación."""
    nombre: str
    pasa: bool
    valor: float = 0.0
    detalle: str = ""


@dataclass(frozen=True)
class Testigo:
    """Fórmula que alcanza la mejor separación |f(x) − f(y)| encontrada para un par."""
    par: tuple[int, int]
    valor: float
    formula: Formula


@dataclass
class EstimacionLogica:
    """
    Cota inferior λ̂ (Λ) o ℓ̂ (L_σ) de la pseudométrica, con sus testigos.

    `formulas` son las fórmulas de estado evaluadas, en orden de generación.
    """
    logica: str
    matriz: MatrizPseudometrica
    testigos: list[Testigo]
    formulas: list[Formula]
    exacta: bool = True
