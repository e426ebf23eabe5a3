# app/servicios/discretizacion_servicio.py
"""
Rejillas temporales y horizontes de truncamiento.

El supremo sobre t ≥ 0 de los funcionales se sustituye por un máximo sobre
una rejilla finita [0, T]; como W ≤ 1, los tiempos t ≥ T aportan como mucho
c^T, y T se elige con c^T ≤ ε_time.
"""
import logging
import math
from fractions import Fraction
from typing import Union

import numpy as np

from app.dominio.excepciones.dominio_excepciones import (
    ConfiguracionInvalidaError,
    DescuentoInvalidoError,
    PasoInvalidoError,
)
from app.dominio.objetos_valor.rejilla_temporal import RejillaTemporal

logger = logging.getLogger(__name__)

Racional = Union[Fraction, int, str]

# Margen para que ln ε / ln c exacto (p. ej. 1.0) no se redondee hacia arriba.
_HOLGURA_LOGARITMO = 1e-12


def validar_descuento(c: float) -> None:
    if not 0 < c < 1:
        raise DescuentoInvalidoError(c)


def _paso(step: Racional) -> Fraction:
    try:
        paso = Fraction(repr(step)) if isinstance(step, float) else Fraction(step)
    except (ValueError, ZeroDivisionError, TypeError):
        raise PasoInvalidoError(step) from None
    if paso <= 0:
        raise PasoInvalidoError(step)
    return paso


def horizon_for(c: float, epsilon: float, step: Racional = 1) -> Fraction:
    """
    Menor múltiplo T de `step` con c^T ≤ ε.

    Raises:
        DescuentoInvalidoError: Si c no está en (0, 1).
        ConfiguracionInvalidaError: Si ε no es positivo.
    """
    validar_descuento(c)
    if not epsilon > 0:
        raise ConfiguracionInvalidaError(f"La tolerancia temporal debe ser positiva y es {epsilon}")
    paso = _paso(step)
    if epsilon >= 1:
        return Fraction(0)

    pasos = max(0, math.ceil(math.log(epsilon) / math.log(c) / float(paso) - _HOLGURA_LOGARITMO))
    while c ** float(pasos * paso) > epsilon * (1 + _HOLGURA_LOGARITMO):
        pasos += 1
    return pasos * paso


def build_time_grid(c: float, epsilon_time: float, step: Racional) -> RejillaTemporal:
    """
    Rejilla uniforme {0, step, 2·step, …, T} con T = horizon_for(c, ε_time, step).

    Raises:
        PasoInvalidoError: Si step ≤ 0.
        DescuentoInvalidoError: Si c no está en (0, 1).
    """
    paso = _paso(step)
    horizonte = horizon_for(c, epsilon_time, paso)
    cantidad = int(horizonte / paso)
    rejilla = RejillaTemporal(times=tuple(k * paso for k in range(cantidad + 1)), horizon=horizonte)
    logger.debug(f"Rejilla temporal con {len(rejilla)} tiempos hasta T={horizonte} (c={c}, ε={epsilon_time})")
    return rejilla


def truncation_bound(valores: np.ndarray, c: float, tg: RejillaTemporal, tope: Racional) -> tuple[float, float]:
    """
    Compara max_t c^t·W(t) sobre toda la rejilla y sobre la rejilla truncada en `tope`.

    Args:
        valores: Tabla de valores W en [0, 1]; la primera dimensión recorre la rejilla.
        c: Factor de descuento.
        tg: Rejilla temporal completa.
        tope: Tiempo de truncamiento T.

    Returns:
        (mayor diferencia entre ambos máximos, cota c^T).
    """
    tabla = np.asarray(valores, dtype=float)
    if tabla.shape[0] != len(tg):
        raise ConfiguracionInvalidaError("La tabla debe tener una fila por tiempo de la rejilla")
    descontados = tabla * tg.descuentos(c).reshape((-1,) + (1,) * (tabla.ndim - 1))
    mascara = np.array([t <= Fraction(tope) for t in tg.times])
    completo = descontados.max(axis=0)
    truncado = descontados[mascara].max(axis=0)
    return float(np.max(completo - truncado)), c ** float(Fraction(tope))


def rejilla_refinada(tg: RejillaTemporal) -> RejillaTemporal:
    """Misma rejilla con el paso dividido por dos."""
    if tg.paso is None:
        return tg
    paso = tg.paso / 2
    cantidad = int(tg.horizon / paso)
    return RejillaTemporal(times=tuple(k * paso for k in range(cantidad + 1)), horizon=tg.horizon)
