# app/dominio/objetos_valor/distribucion.py
import math
from dataclasses import dataclass
from typing import ClassVar, Sequence

import numpy as np

from app.dominio.excepciones.dominio_excepciones import DistribucionInvalidaError


# frozen=True: una distribución no cambia una vez validada.
@dataclass(frozen=True, eq=False)
class DistribucionDiscreta:
    """
    Objeto de valor inmutable para una distribución de probabilidad finita.

    `support` contiene índices de un conjunto base (estados o trayectorias) y
    `weights` sus pesos, no negativos y con suma 1.
    """
    support: tuple[int, ...]
    weights: np.ndarray

    TOLERANCIA_MASA: ClassVar[float] = 1e-12

    def __post_init__(self):
        soporte = tuple(int(i) for i in self.support)
        pesos = np.array(self.weights, dtype=float).reshape(-1)

        if not soporte:
            raise DistribucionInvalidaError("el soporte está vacío")
        if len(soporte) != pesos.shape[0]:
            raise DistribucionInvalidaError(
                f"el soporte tiene {len(soporte)} puntos y hay {pesos.shape[0]} pesos"
            )
        if len(set(soporte)) != len(soporte):
            raise DistribucionInvalidaError("el soporte contiene índices repetidos")
        if min(soporte) < 0:
            raise DistribucionInvalidaError("el soporte contiene índices negativos")
        if not np.all(np.isfinite(pesos)) or np.any(pesos < 0):
            raise DistribucionInvalidaError("hay pesos negativos o no finitos")
        masa = math.fsum(pesos)
        if abs(masa - 1.0) > self.TOLERANCIA_MASA:
            raise DistribucionInvalidaError(f"los pesos suman {masa!r} y deben sumar 1")

        pesos.setflags(write=False)
        object.__setattr__(self, "support", soporte)
        object.__setattr__(self, "weights", pesos)

    @classmethod
    def punto(cls, indice: int) -> "DistribucionDiscreta":
        """Masa puntual (Dirac) en `indice`."""
        return cls(support=(indice,), weights=np.ones(1))

    @classmethod
    def desde_vector(cls, vector: Sequence[float]) -> "DistribucionDiscreta":
        """Construye la distribución sobre los índices con peso estrictamente positivo."""
        denso = np.asarray(vector, dtype=float)
        soporte = np.flatnonzero(denso > 0)
        return cls(support=tuple(soporte.tolist()), weights=denso[soporte])

    @classmethod
    def uniforme(cls, soporte: Sequence[int]) -> "DistribucionDiscreta":
        return cls(support=tuple(soporte), weights=np.full(len(soporte), 1.0 / len(soporte)))

    @property
    def masa_total(self) -> float:
        return math.fsum(self.weights)

    def como_vector(self, tamano: int) -> np.ndarray:
        """Devuelve los pesos como vector denso sobre un conjunto base de `tamano` puntos."""
        if max(self.support) >= tamano:
            raise DistribucionInvalidaError(
                f"el índice {max(self.support)} no pertenece a un conjunto base de {tamano} puntos"
            )
        denso = np.zeros(tamano)
        denso[list(self.support)] = self.weights
        return denso

    def esperanza(self, valores: np.ndarray) -> float:
        """Integral de una función dada por sus valores sobre el conjunto base."""
        return float(np.dot(self.weights, np.asarray(valores)[list(self.support)]))

    def __repr__(self) -> str:
        return f"<DistribucionDiscreta(puntos={len(self.support)}, masa={self.masa_total:.12g})>"
