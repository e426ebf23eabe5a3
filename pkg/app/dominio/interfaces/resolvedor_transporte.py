# app/dominio/interfaces/resolvedor_transporte.py
from typing import NamedTuple, Protocol, runtime_checkable

import numpy as np


class SolucionTransporte(NamedTuple):
    """Salida cruda de un resolvedor: plan óptimo y potencial dual del destino."""
    plan: np.ndarray
    potencial_destino: np.ndarray


# --- Protocol Definition (Interface) ---
@runtime_checkable
class IResolvedorTransporte(Protocol):
    """
    Puerto para resolver el problema de transporte discreto exacto.

    Las implementaciones reciben pesos estrictamente positivos con la misma
    masa total y la matriz de costes |a| × |b|, y devuelven un plan óptimo
    junto con potenciales duales (u, v) factibles: u_i + v_j ≤ M_ij, con
    igualdad en el soporte del plan.
    """
    def resolver(self, a: np.ndarray, b: np.ndarray, costes: np.ndarray) -> SolucionTransporte:
        ...
