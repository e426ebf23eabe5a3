# app/servicios/trayectorias_servicio.py
import logging
from typing import Optional

import numpy as np

from app.core.config import settings
from app.dominio.entidades.conjunto_trayectorias import ConjuntoTrayectorias
from app.dominio.entidades.modelo_proceso import ModeloProceso, TipoProceso
from app.dominio.excepciones.dominio_excepciones import (
    ConfiguracionInvalidaError,
    EnumeracionDemasiadoGrandeError,
    PrecondicionFallidaError,
)
from app.dominio.objetos_valor.modo_trayectorias import ModoTrayectorias, TipoModoTrayectorias
from app.dominio.objetos_valor.rejilla_temporal import RejillaTemporal

logger = logging.getLogger(__name__)


def semilla_derivada(semilla: int, estado: int) -> int:
    """Semilla independiente por estado, determinista a partir de la semilla de la ejecución."""
    return int(np.random.SeedSequence([semilla, estado]).generate_state(1)[0])


class TrayectoriasServicio:
    """
    Servicio de acceso a las distribuciones de trayectorias ℙ^x restringidas a una rejilla.
    """
    def __init__(self, enumeration_cap: Optional[int] = None):
        """
        Args:
            enumeration_cap: Tope de |estados|^(longitud de la rejilla) para enumerar.
        """
        self.enumeration_cap = enumeration_cap or settings.ENUMERATION_CAP

    def sample_trajectories(
        self,
        model: ModeloProceso,
        x: int,
        time_grid: RejillaTemporal,
        n_samples: int,
        seed: int,
    ) -> ConjuntoTrayectorias:
        """
        Muestrea n trayectorias desde x con pesos uniformes 1/n.

        Raises:
            ConfiguracionInvalidaError: Si n_samples < 1 o x no es un estado.
        """
        if n_samples < 1:
            raise ConfiguracionInvalidaError(f"El número de muestras debe ser ≥ 1 y es {n_samples}")
        self._exigir_estado(model, x)
        generador = np.random.default_rng(seed)

        caminos = np.empty((n_samples, len(time_grid)), dtype=np.int64)
        caminos[:, 0] = x
        for i, incremento in enumerate(time_grid.incrementos()):
            acumulada = np.cumsum(model.matriz_nucleo(incremento), axis=1)
            sorteo = generador.random(n_samples)
            # Inversión de la función de distribución de cada fila.
            siguiente = (sorteo[:, None] >= acumulada[caminos[:, i]]).sum(axis=1)
            caminos[:, i + 1] = np.minimum(siguiente, model.n - 1)

        return ConjuntoTrayectorias(
            time_grid=time_grid,
            trajectories=caminos,
            weights=np.full(n_samples, 1.0 / n_samples),
            exacto=False,
            semilla=seed,
        )

    def enumerate_trajectories(self, model: ModeloProceso, x: int, time_grid: RejillaTemporal) -> ConjuntoTrayectorias:
        """
        Enumera las trayectorias de probabilidad positiva con sus pesos exactos.

        Raises:
            PrecondicionFallidaError: Si el modelo no es una cadena finita.
            EnumeracionDemasiadoGrandeError: Si |estados|^(longitud) supera el tope.
        """
        if model.kind != TipoProceso.CADENA_FINITA:
            raise PrecondicionFallidaError("la enumeración exacta solo está disponible para cadenas finitas")
        self._exigir_estado(model, x)
        tamano = model.n ** len(time_grid)
        if tamano > self.enumeration_cap:
            raise EnumeracionDemasiadoGrandeError(tamano, self.enumeration_cap)

        caminos = np.full((1, 1), x, dtype=np.int64)
        pesos = np.ones(1)
        for incremento in time_grid.incrementos():
            extendidos = pesos[:, None] * model.matriz_nucleo(incremento)[caminos[:, -1]]
            filas, estados = np.nonzero(extendidos > 0)
            caminos = np.column_stack([caminos[filas], estados])
            pesos = extendidos[filas, estados]

        return ConjuntoTrayectorias(time_grid=time_grid, trajectories=caminos, weights=pesos, exacto=True)

    def ensembles_for(
        self, model: ModeloProceso, time_grid: RejillaTemporal, modo: ModoTrayectorias
    ) -> list[ConjuntoTrayectorias]:
        """
        Un conjunto de trayectorias por estado, obtenido una sola vez por ejecución.

        En modo Monte Carlo cada estado usa una semilla derivada de la semilla
        de la ejecución y del índice del estado.
        """
        if modo.tipo == TipoModoTrayectorias.AUTOMATICO:
            try:
                return [self.enumerate_trajectories(model, x, time_grid) for x in range(model.n)]
            except (EnumeracionDemasiadoGrandeError, PrecondicionFallidaError) as e:
                logger.info(f"Se usa Monte Carlo con {modo.muestras} muestras por estado: {e}")
        elif modo.tipo == TipoModoTrayectorias.EXACTO:
            return [self.enumerate_trajectories(model, x, time_grid) for x in range(model.n)]

        return [
            self.sample_trajectories(model, x, time_grid, modo.muestras, semilla_derivada(modo.semilla, x))
            for x in range(model.n)
        ]

    @staticmethod
    def marginals(ensemble: ConjuntoTrayectorias, n_states: int) -> np.ndarray:
        """Matriz len(rejilla) × n con la distribución del estado en cada tiempo."""
        return np.vstack([ensemble.marginal(i, n_states) for i in range(len(ensemble.time_grid))])

    @staticmethod
    def _exigir_estado(model: ModeloProceso, x: int) -> None:
        if not 0 <= x < model.n:
            raise ConfiguracionInvalidaError(f"El estado {x} no existe en un modelo de {model.n} estados")
