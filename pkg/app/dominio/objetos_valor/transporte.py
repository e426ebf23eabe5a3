# app/dominio/objetos_valor/transporte.py
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from app.dominio.excepciones.dominio_excepciones import DistribucionInvalidaError, ViolacionInvarianteError
from app.dominio.objetos_valor.distribucion import DistribucionDiscreta


@dataclass(frozen=True, eq=False)
class MatrizCosto:
    """
    Función de coste c: X × X → [0, 1] sobre un conjunto base finito.

    La matriz es cuadrada sobre el conjunto base; las distribuciones indexan
    sus filas y columnas a través de su soporte.
    """
    values: np.ndarray

    TOLERANCIA: ClassVar[float] = 1e-12

    def __post_init__(self):
        valores = np.array(self.values, dtype=float)
        if valores.ndim != 2 or valores.shape[0] != valores.shape[1]:
            raise DistribucionInvalidaError(f"la matriz de coste debe ser cuadrada y tiene forma {valores.shape}")
        if not np.all(np.isfinite(valores)):
            raise DistribucionInvalidaError("la matriz de coste contiene valores no finitos")
        if valores.min(initial=0.0) < -self.TOLERANCIA or valores.max(initial=0.0) > 1.0 + self.TOLERANCIA:
            raise DistribucionInvalidaError("los costes deben estar en [0, 1]")
        if np.abs(np.diag(valores)).max(initial=0.0) > self.TOLERANCIA:
            raise DistribucionInvalidaError("la diagonal del coste debe ser nula")
        valores = np.clip(valores, 0.0, 1.0)
        valores.setflags(write=False)
        object.__setattr__(self, "values", valores)

    @property
    def tamano(self) -> int:
        return self.values.shape[0]

    def submatriz(self, mu: DistribucionDiscreta, nu: DistribucionDiscreta) -> np.ndarray:
        """Bloque |supp μ| × |supp ν| del coste."""
        for distribucion in (mu, nu):
            if max(distribucion.support) >= self.tamano:
                raise DistribucionInvalidaError(
                    f"el soporte usa el índice {max(distribucion.support)} y el coste cubre {self.tamano} puntos"
                )
        return self.values[np.ix_(mu.support, nu.support)]

    def domina(self, otra: "MatrizCosto", tolerancia: float = TOLERANCIA) -> bool:
        """True si self ≥ otra entrada a entrada."""
        return bool(np.all(self.values >= otra.values - tolerancia))


@dataclass(frozen=True, eq=False)
class Acoplamiento:
    """Medida sobre el producto de soportes cuyas marginales son μ y ν."""
    matrix: np.ndarray

    def __post_init__(self):
        matriz = np.array(self.matrix, dtype=float)
        if matriz.ndim != 2 or np.any(matriz < -1e-12):
            raise ViolacionInvarianteError("el acoplamiento debe ser una matriz no negativa")
        matriz = np.maximum(matriz, 0.0)
        matriz.setflags(write=False)
        object.__setattr__(self, "matrix", matriz)

    def desviacion_marginal(self, mu: DistribucionDiscreta, nu: DistribucionDiscreta) -> float:
        """Máxima diferencia entre las sumas por filas/columnas y los pesos de μ y ν."""
        if self.matrix.shape != (len(mu.support), len(nu.support)):
            return float("inf")
        filas = np.abs(self.matrix.sum(axis=1) - mu.weights).max(initial=0.0)
        columnas = np.abs(self.matrix.sum(axis=0) - nu.weights).max(initial=0.0)
        return float(max(filas, columnas))


@dataclass(frozen=True, eq=False)
class ResultadoTransporte:
    """
    Resultado de un problema de transporte óptimo.

    `potential` es el testigo dual h, definido sobre todo el conjunto base
    (y por tanto sobre cada punto de ambos soportes).
    """
    cost: float
    coupling: Acoplamiento
    potential: np.ndarray

    def valor_dual(self, mu: DistribucionDiscreta, nu: DistribucionDiscreta) -> float:
        """∫h dμ − ∫h dν."""
        return mu.esperanza(self.potential) - nu.esperanza(self.potential)
