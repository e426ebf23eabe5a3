# app/dominio/objetos_valor/rejilla_temporal.py
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from app.dominio.excepciones.dominio_excepciones import RejillaInvalidaError, TiempoNoSoportadoError

Racional = Union[Fraction, int, str]


@dataclass(frozen=True, slots=True)
class RejillaTemporal:
    """
    Rejilla de tiempos racionales exactos 0 = t_0 < t_1 < … ≤ T.

    Los tiempos se guardan como `Fraction` y solo se convierten a coma
    flotante al evaluar núcleos o descuentos.
    """
    times: tuple[Fraction, ...]
    horizon: Optional[Fraction] = None
    uniforme: bool = True

    def __post_init__(self):
        tiempos = tuple(Fraction(t) for t in self.times)
        if not tiempos:
            raise RejillaInvalidaError("la rejilla temporal está vacía")
        if tiempos[0] != 0:
            raise RejillaInvalidaError(f"la rejilla temporal debe empezar en 0 y empieza en {tiempos[0]}")
        if any(b <= a for a, b in zip(tiempos, tiempos[1:])):
            raise RejillaInvalidaError("los tiempos deben ser estrictamente crecientes")
        horizonte = tiempos[-1] if self.horizon is None else Fraction(self.horizon)
        if tiempos[-1] > horizonte:
            raise RejillaInvalidaError(f"el tiempo {tiempos[-1]} supera el horizonte {horizonte}")
        if self.uniforme and len(tiempos) > 2:
            pasos = {b - a for a, b in zip(tiempos, tiempos[1:])}
            if len(pasos) != 1:
                raise RejillaInvalidaError("el espaciado no es uniforme")
        object.__setattr__(self, "times", tiempos)
        object.__setattr__(self, "horizon", horizonte)

    @classmethod
    def desde(cls, tiempos: Iterable[Racional], uniforme: bool = True) -> "RejillaTemporal":
        return cls(times=tuple(Fraction(t) for t in tiempos), uniforme=uniforme)

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self):
        return iter(self.times)

    @property
    def paso(self) -> Optional[Fraction]:
        return self.times[1] - self.times[0] if len(self.times) > 1 else None

    def indice(self, tiempo: Racional) -> int:
        """Posición de `tiempo` en la rejilla; TiempoNoSoportadoError si no pertenece a ella."""
        buscado = Fraction(tiempo)
        try:
            return self.times.index(buscado)
        except ValueError:
            raise TiempoNoSoportadoError(buscado, "no pertenece a la rejilla temporal") from None

    def como_floats(self) -> np.ndarray:
        return np.array([float(t) for t in self.times])

    def descuentos(self, c: float) -> np.ndarray:
        """Vector c^t para cada tiempo de la rejilla."""
        return np.power(c, self.como_floats())

    def incrementos(self) -> tuple[Fraction, ...]:
        return tuple(b - a for a, b in zip(self.times, self.times[1:]))

    def truncada(self, tope: Racional) -> "RejillaTemporal":
        """Subrejilla con los tiempos ≤ tope."""
        limite = Fraction(tope)
        return RejillaTemporal(times=tuple(t for t in self.times if t <= limite), uniforme=self.uniforme)

    def __str__(self) -> str:
        return "[" + ", ".join(str(t) for t in self.times) + "]"
