# app/dominio/objetos_valor/matriz_pseudometrica.py
from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np

from app.dominio.excepciones.dominio_excepciones import PseudometricaInvalidaError


def violacion_triangular(valores: np.ndarray) -> float:
    """Mayor exceso m(i,j) − (m(i,k) + m(k,j)) sobre todas las ternas (0 si se cumple)."""
    n = valores.shape[0]
    peor = 0.0
    for k in range(n):
        exceso = valores - (valores[:, k][:, None] + valores[k, :][None, :])
        peor = max(peor, float(exceso.max()))
    return peor


def violacion_pseudometrica(valores: np.ndarray) -> tuple[float, str]:
    """
    Mide cuánto se aleja una matriz de ser una pseudométrica acotada por 1.

    Returns:
        (violación máxima, descripción del axioma más violado).
    """
    if valores.ndim != 2 or valores.shape[0] != valores.shape[1]:
        return float("inf"), f"la matriz debe ser cuadrada y tiene forma {valores.shape}"
    if not np.all(np.isfinite(valores)):
        return float("inf"), "hay valores no finitos"
    candidatos = [
        (float(np.abs(valores - valores.T).max(initial=0.0)), "simetría"),
        (float(np.abs(np.diag(valores)).max(initial=0.0)), "diagonal nula"),
        (float(max(-valores.min(initial=0.0), valores.max(initial=0.0) - 1.0, 0.0)), "rango [0, 1]"),
        (violacion_triangular(valores), "desigualdad triangular"),
    ]
    return max(candidatos, key=lambda par: par[0])


@dataclass(frozen=True, eq=False)
class MatrizPseudometrica:
    """
    Pseudométrica acotada por 1 sobre un espacio de estados finito.

    Es el elemento del retículo de pseudométricas sobre el que actúan los
    funcionales; en espacios finitos los subretículos semicontinuos y continuos
    coinciden con el retículo completo.
    """
    values: np.ndarray
    ruido_muestreo: float = 0.0

    TOLERANCIA: ClassVar[float] = 1e-9

    def __post_init__(self):
        valores = np.array(self.values, dtype=float)
        violacion, axioma = violacion_pseudometrica(valores)
        if violacion > self.TOLERANCIA:
            raise PseudometricaInvalidaError(f"{axioma} violada en {violacion:.3e}")
        # Se absorben los errores de redondeo admitidos por la tolerancia.
        valores = np.clip((valores + valores.T) / 2.0, 0.0, 1.0)
        np.fill_diagonal(valores, 0.0)
        valores.setflags(write=False)
        object.__setattr__(self, "values", valores)

    @classmethod
    def cero(cls, n: int) -> "MatrizPseudometrica":
        return cls(np.zeros((n, n)))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def distancia_sup(self, otra: "MatrizPseudometrica") -> float:
        """Norma del supremo de la diferencia entre dos matrices."""
        return float(np.abs(self.values - otra.values).max(initial=0.0))

    def exceso_sobre(self, otra: "MatrizPseudometrica") -> tuple[float, Optional[tuple[int, int]]]:
        """Mayor valor de self − otra y su ubicación; (≤ 0, par) cuando self ≤ otra."""
        diferencia = self.values - otra.values
        i, j = np.unravel_index(int(np.argmax(diferencia)), diferencia.shape)
        return float(diferencia[i, j]), (int(i), int(j))

    def __getitem__(self, par: tuple[int, int]) -> float:
        return float(self.values[par])

    def __repr__(self) -> str:
        return f"<MatrizPseudometrica(n={self.n}, max={self.values.max(initial=0.0):.6g})>"
