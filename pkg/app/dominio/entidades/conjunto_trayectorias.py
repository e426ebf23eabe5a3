# app/dominio/entidades/conjunto_trayectorias.py
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.dominio.excepciones.dominio_excepciones import DistribucionInvalidaError
from app.dominio.objetos_valor.rejilla_temporal import RejillaTemporal


@dataclass(frozen=True, eq=False)
class ConjuntoTrayectorias:
    """
    Distribución finita de trayectorias restringidas a una rejilla temporal.

    `trajectories` es una matriz k × len(time_grid) de índices de estado y
    `weights` los pesos de cada fila.
    """
    time_grid: RejillaTemporal
    trajectories: np.ndarray
    weights: np.ndarray
    exacto: bool = True
    semilla: Optional[int] = None

    def __post_init__(self):
        caminos = np.array(self.trajectories, dtype=np.int64)
        pesos = np.array(self.weights, dtype=float).reshape(-1)
        if caminos.ndim != 2 or caminos.shape[0] == 0:
            raise DistribucionInvalidaError("el conjunto de trayectorias está vacío")
        if caminos.shape[1] != len(self.time_grid):
            raise DistribucionInvalidaError(
                f"las trayectorias tienen longitud {caminos.shape[1]} y la rejilla {len(self.time_grid)}"
            )
        if pesos.shape[0] != caminos.shape[0] or np.any(pesos < 0):
            raise DistribucionInvalidaError("debe haber un peso no negativo por trayectoria")
        if abs(math.fsum(pesos) - 1.0) > 1e-12:
            raise DistribucionInvalidaError(f"los pesos de las trayectorias suman {math.fsum(pesos)!r}")
        caminos.setflags(write=False)
        pesos.setflags(write=False)
        object.__setattr__(self, "trajectories", caminos)
        object.__setattr__(self, "weights", pesos)

    def __len__(self) -> int:
        return self.trajectories.shape[0]

    @property
    def origen(self) -> int:
        return int(self.trajectories[0, 0])

    def marginal(self, indice_tiempo: int, n_estados: int) -> np.ndarray:
        """Distribución del estado en el tiempo `time_grid[indice_tiempo]`."""
        return np.bincount(self.trajectories[:, indice_tiempo], weights=self.weights, minlength=n_estados)
