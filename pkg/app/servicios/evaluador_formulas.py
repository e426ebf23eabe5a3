# app/servicios/evaluador_formulas.py
import logging
import threading
from typing import Optional

import numpy as np

from app.dominio.entidades.conjunto_trayectorias import ConjuntoTrayectorias
from app.dominio.entidades.modelo_proceso import ModeloProceso
from app.dominio.excepciones.dominio_excepciones import FormulaError
from app.dominio.logica.formulas import (
    Const,
    Diamond,
    Eval,
    Formula,
    FormulaEstado,
    FormulaTrayectoria,
    IntegralPath,
    Min,
    MinusQ,
    Neg,
    Obs,
    TrajMax,
    TrajMin,
    TrajMinusQ,
    TrajPlusQ,
)
from app.dominio.objetos_valor.modo_trayectorias import ModoTrayectorias, TipoModoTrayectorias
from app.dominio.objetos_valor.rejilla_temporal import RejillaTemporal
from app.servicios.trayectorias_servicio import TrayectoriasServicio

logger = logging.getLogger(__name__)


class EvaluadorFormulas:
    """
    Evalúa fórmulas de Λ, L_σ y L_τ sobre todos los estados a la vez.

    Cada fórmula de estado se convierte en un vector de n valores y se guarda
    en caché; las fórmulas de trayectoria se evalúan sobre la unión de los
    conjuntos de trayectorias de todos los estados, obtenidos una sola vez.
    """
    def __init__(
        self,
        model: ModeloProceso,
        c: float,
        tg: RejillaTemporal,
        trayectorias: Optional[TrayectoriasServicio] = None,
        modo: Optional[ModoTrayectorias] = None,
    ):
        self.model = model
        self.c = c
        self.tg = tg
        self.trayectorias = trayectorias or TrayectoriasServicio()
        self.modo = modo or ModoTrayectorias.exacto()
        self._cache_estado: dict[FormulaEstado, np.ndarray] = {}
        self._cache_trayectoria: dict[FormulaTrayectoria, np.ndarray] = {}
        self._cerrojo = threading.Lock()
        self._conjuntos: Optional[list[ConjuntoTrayectorias]] = None
        self._caminos: Optional[np.ndarray] = None
        self._pesos: Optional[np.ndarray] = None
        self._origen: Optional[np.ndarray] = None

    # --- Trayectorias ---

    @property
    def conjuntos(self) -> list[ConjuntoTrayectorias]:
        with self._cerrojo:
            if self._conjuntos is None:
                self._conjuntos = self.trayectorias.ensembles_for(self.model, self.tg, self.modo)
                self._caminos = np.vstack([e.trajectories for e in self._conjuntos])
                self._pesos = np.concatenate([e.weights for e in self._conjuntos])
                self._origen = np.concatenate(
                    [np.full(len(e), x, dtype=np.int64) for x, e in enumerate(self._conjuntos)]
                )
                if self.modo.tipo != TipoModoTrayectorias.EXACTO:
                    exactos = all(e.exacto for e in self._conjuntos)
                    logger.info(
                        f"Trayectorias para ∫: {len(self._caminos)} en total "
                        f"({'enumeración exacta' if exactos else f'Monte Carlo, semilla {self.modo.semilla}'})"
                    )
        return self._conjuntos

    @property
    def caminos(self) -> np.ndarray:
        """Todas las trayectorias de todos los estados, apiladas."""
        self.conjuntos
        return self._caminos

    @property
    def exacto(self) -> bool:
        return all(e.exacto for e in self.conjuntos)

    # --- Evaluación ---

    def estado(self, f: FormulaEstado) -> np.ndarray:
        """Vector (f(x))_x en [0, 1]."""
        guardado = self._cache_estado.get(f)
        if guardado is not None:
            return guardado
        valores = np.clip(self._estado(f), 0.0, 1.0)
        valores.setflags(write=False)
        self._cache_estado[f] = valores
        return valores

    def _estado(self, f: FormulaEstado) -> np.ndarray:
        if isinstance(f, Const):
            return np.full(self.model.n, float(f.q))
        if isinstance(f, Obs):
            return np.array(self.model.observable.values, dtype=float)
        if isinstance(f, Min):
            return np.minimum(self.estado(f.f1), self.estado(f.f2))
        if isinstance(f, Neg):
            return 1.0 - self.estado(f.f)
        if isinstance(f, MinusQ):
            return np.maximum(0.0, self.estado(f.f) - float(f.q))
        if isinstance(f, Diamond):
            return self.c ** float(f.t) * (self.model.matriz_nucleo(f.t) @ self.estado(f.f))
        if isinstance(f, IntegralPath):
            # Sin caché por trayectoria: solo se guarda el vector por estado.
            valores = self.trayectoria(f.g, self.caminos)
            return np.bincount(self._origen, weights=self._pesos * valores, minlength=self.model.n)
        raise FormulaError(f"'{type(f).__name__}' no es una fórmula de estado")

    def trayectorias_todas(self, g: FormulaTrayectoria) -> np.ndarray:
        """Valores de g sobre las trayectorias apiladas de todos los estados."""
        guardado = self._cache_trayectoria.get(g)
        if guardado is None:
            guardado = self.trayectoria(g, self.caminos)
            guardado.setflags(write=False)
            self._cache_trayectoria[g] = guardado
        return guardado

    def trayectoria(self, g: FormulaTrayectoria, caminos: np.ndarray) -> np.ndarray:
        """
        Valores de g sobre una matriz k × len(tg) de trayectorias.

        Raises:
            TiempoNoSoportadoError: Si un Eval usa un tiempo fuera de la rejilla.
        """
        caminos = np.atleast_2d(caminos)
        if isinstance(g, Eval):
            indice = self.tg.indice(g.t)
            return self.c ** float(g.t) * self.estado(g.f)[caminos[:, indice]]
        if isinstance(g, TrajMin):
            return np.minimum(self.trayectoria(g.g1, caminos), self.trayectoria(g.g2, caminos))
        if isinstance(g, TrajMax):
            return np.maximum(self.trayectoria(g.g1, caminos), self.trayectoria(g.g2, caminos))
        if isinstance(g, TrajMinusQ):
            return np.maximum(0.0, self.trayectoria(g.g, caminos) - float(g.q))
        if isinstance(g, TrajPlusQ):
            return np.minimum(1.0, self.trayectoria(g.g, caminos) + float(g.q))
        raise FormulaError(f"'{type(g).__name__}' no es una fórmula de trayectoria")

    def valores(self, formula: Formula) -> np.ndarray:
        """Vector por estado o por trayectoria apilada según el tipo de fórmula."""
        if isinstance(formula, (Eval, TrajMin, TrajMax, TrajMinusQ, TrajPlusQ)):
            return self.trayectorias_todas(formula)
        return self.estado(formula)
