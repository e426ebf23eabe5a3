# app/dominio/entidades/modelo_proceso.py
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from app.dominio.excepciones.dominio_excepciones import (
    ConfiguracionInvalidaError,
    HonestidadError,
    PseudometricaInvalidaError,
    RejillaInvalidaError,
    TiempoInvalidoError,
)
from app.dominio.objetos_valor.distribucion import DistribucionDiscreta
from app.dominio.objetos_valor.matriz_pseudometrica import violacion_pseudometrica

TOLERANCIA_HONESTIDAD = 1e-12


class TipoProceso(str, Enum):
    CADENA_FINITA = "finite-chain"
    BROWNIANO = "brownian"
    ORNSTEIN_UHLENBECK = "ornstein-uhlenbeck"


@dataclass(frozen=True, eq=False)
class EspacioEstados:
    """
    Espacio de estados finito con su métrica base Δ acotada por 1.

    `points` son coordenadas reales (rejillas) o etiquetas enteras (cadenas).
    """
    points: tuple[float, ...]
    base_metric: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        puntos = tuple(float(p) for p in self.points)
        if not puntos:
            raise RejillaInvalidaError("el espacio de estados está vacío")
        if len(set(puntos)) != len(puntos):
            raise RejillaInvalidaError("los puntos del espacio de estados deben ser distintos")
        metrica = np.array(self.base_metric, dtype=float)
        if metrica.shape != (len(puntos), len(puntos)):
            raise RejillaInvalidaError(f"la métrica base tiene forma {metrica.shape}")
        violacion, axioma = violacion_pseudometrica(metrica)
        if violacion > 1e-9:
            raise PseudometricaInvalidaError(f"métrica base: {axioma} violada en {violacion:.3e}")
        metrica.setflags(write=False)
        etiquetas = tuple(self.labels) or tuple(f"{p:.12g}" for p in puntos)
        if len(etiquetas) != len(puntos):
            raise ConfiguracionInvalidaError("debe haber una etiqueta por estado")
        object.__setattr__(self, "points", puntos)
        object.__setattr__(self, "base_metric", metrica)
        object.__setattr__(self, "labels", etiquetas)

    @classmethod
    def desde_puntos(cls, puntos: Sequence[float], labels: Sequence[str] = ()) -> "EspacioEstados":
        """Métrica base min(1, |x − y| / amplitud), con amplitud = max − min de la rejilla."""
        coordenadas = np.asarray(puntos, dtype=float)
        amplitud = float(coordenadas.max() - coordenadas.min()) or 1.0
        metrica = np.minimum(1.0, np.abs(coordenadas[:, None] - coordenadas[None, :]) / amplitud)
        return cls(points=tuple(coordenadas.tolist()), base_metric=metrica, labels=tuple(labels))

    @classmethod
    def rejilla_uniforme(cls, minimo: float, maximo: float, paso: float) -> "EspacioEstados":
        if paso <= 0:
            raise RejillaInvalidaError(f"el paso espacial debe ser positivo y es {paso}")
        if maximo < minimo:
            raise RejillaInvalidaError(f"el mínimo {minimo} supera al máximo {maximo}")
        cantidad = int(round((maximo - minimo) / paso)) + 1
        return cls.desde_puntos(minimo + paso * np.arange(cantidad))

    @classmethod
    def etiquetas_enteras(cls, n: int, labels: Sequence[str] = ()) -> "EspacioEstados":
        """Estados 0..n−1 de una cadena con la métrica discreta (1 fuera de la diagonal)."""
        metrica = 1.0 - np.eye(n)
        return cls(points=tuple(float(i) for i in range(n)), base_metric=metrica,
                   labels=tuple(labels) or tuple(str(i) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.points)

    def es_uniforme(self, tolerancia: float = 1e-9) -> bool:
        if self.n < 3:
            return True
        pasos = np.diff(np.asarray(self.points))
        return bool(np.all(np.abs(pasos - pasos[0]) <= tolerancia * max(1.0, abs(pasos[0]))))

    @property
    def paso(self) -> Optional[float]:
        return float(self.points[1] - self.points[0]) if self.n > 1 else None


@dataclass(frozen=True, eq=False)
class Observable:
    """Función obs: E → [0, 1], dada por su valor en cada estado."""
    values: np.ndarray

    def __post_init__(self):
        valores = np.array(self.values, dtype=float).reshape(-1)
        if valores.size == 0 or not np.all(np.isfinite(valores)):
            raise ConfiguracionInvalidaError("El observable debe tener valores finitos")
        if valores.min() < 0.0 or valores.max() > 1.0:
            raise ConfiguracionInvalidaError("Los valores del observable deben estar en [0, 1]")
        valores.setflags(write=False)
        object.__setattr__(self, "values", valores)

    def __len__(self) -> int:
        return self.values.shape[0]


GeneradorNucleo = Callable[[Fraction], np.ndarray]


@dataclass(frozen=True, eq=False)
class ModeloProceso:
    """
    Proceso de Markov honesto sobre un espacio de estados finito.

    El `generador` devuelve, para cada tiempo t > 0, la matriz n×n cuyas filas
    son los núcleos P_t(x, ·). El modelo garantiza P_0 = I y comprueba la
    honestidad (filas de suma 1) de cada matriz antes de guardarla en caché.
    """
    space: EspacioEstados
    observable: Observable
    kind: TipoProceso
    generador: GeneradorNucleo = field(repr=False)
    matriz_transicion: Optional[np.ndarray] = field(default=None, repr=False)
    paso_cadena: Optional[Fraction] = None
    parametros: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)
    _cerrojo: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if len(self.observable) != self.space.n:
            raise ConfiguracionInvalidaError(
                f"El observable tiene {len(self.observable)} valores y hay {self.space.n} estados"
            )

    @property
    def n(self) -> int:
        return self.space.n

    def matriz_nucleo(self, t) -> np.ndarray:
        """Matriz de núcleos P_t (solo lectura), calculada una vez por tiempo."""
        tiempo = Fraction(t)
        if tiempo < 0:
            raise TiempoInvalidoError(tiempo)
        with self._cerrojo:
            if tiempo in self._cache:
                return self._cache[tiempo]
        if tiempo == 0:
            matriz = np.eye(self.n)
        else:
            matriz = np.array(self.generador(tiempo), dtype=float)
            comprobar_honestidad(matriz, f"el núcleo P_{tiempo}")
        matriz.setflags(write=False)
        with self._cerrojo:
            return self._cache.setdefault(tiempo, matriz)

    def kernel(self, t, x: int) -> DistribucionDiscreta:
        """P_t(x, ·) como distribución sobre los estados."""
        if not 0 <= x < self.n:
            raise ConfiguracionInvalidaError(f"El estado {x} no existe en un modelo de {self.n} estados")
        return DistribucionDiscreta.desde_vector(self.matriz_nucleo(t)[x])

    def __repr__(self) -> str:
        return f"<ModeloProceso(kind={self.kind.value}, estados={self.n})>"


def comprobar_honestidad(matriz: np.ndarray, origen: str) -> None:
    """Lanza HonestidadError si alguna fila no es una distribución de probabilidad."""
    if matriz.ndim != 2 or matriz.shape[0] != matriz.shape[1]:
        raise ConfiguracionInvalidaError(f"{origen} debe ser una matriz cuadrada")
    if np.any(matriz < 0) or not np.all(np.isfinite(matriz)):
        raise ConfiguracionInvalidaError(f"{origen} tiene entradas negativas o no finitas")
    masas = matriz.sum(axis=1)
    peor = int(np.argmax(np.abs(masas - 1.0)))
    if abs(masas[peor] - 1.0) > TOLERANCIA_HONESTIDAD:
        raise HonestidadError(f"{origen} (fila {peor})", float(masas[peor]))
