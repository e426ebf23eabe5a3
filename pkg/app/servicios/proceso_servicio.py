# app/servicios/proceso_servicio.py
import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.stats import norm

from app.dominio.entidades.modelo_proceso import (
    EspacioEstados,
    ModeloProceso,
    Observable,
    TipoProceso,
    comprobar_honestidad,
)
from app.dominio.excepciones.dominio_excepciones import (
    ConfiguracionInvalidaError,
    RejillaInvalidaError,
    TiempoInvalidoError,
    TiempoNoSoportadoError,
)
from app.dominio.objetos_valor.distribucion import DistribucionDiscreta
from app.esquemas.configuracion import ObservableEsquema, ProcesoEsquema

logger = logging.getLogger(__name__)

# Holgura al decidir si una celda cae dentro del radio de truncamiento.
_HOLGURA_RADIO = 1e-9


def _tiempo_positivo(t) -> float:
    try:
        valor = float(t)
    except (TypeError, ValueError):
        raise TiempoInvalidoError(t) from None
    if not valor > 0:
        raise TiempoInvalidoError(t)
    return valor


def _exigir_rejilla_uniforme(grid: EspacioEstados) -> None:
    if not grid.es_uniforme():
        raise RejillaInvalidaError("el espaciado de la rejilla espacial no es uniforme")


def matriz_gaussiana(medias: np.ndarray, desviacion: float, grid: EspacioEstados, radio: float) -> np.ndarray:
    """
    Filas N(media, desviación²) integradas sobre las celdas de la rejilla.

    Cada celda [y − h/2, y + h/2] con |y − media| ≤ radio recibe su masa gaussiana;
    la masa fuera del radio se redistribuye al renormalizar cada fila.
    """
    puntos = np.asarray(grid.points)
    if grid.n == 1:
        return np.ones((len(medias), 1))
    medio_paso = grid.paso / 2.0
    centrado = puntos[None, :] - np.asarray(medias)[:, None]
    masas = norm.cdf((centrado + medio_paso) / desviacion) - norm.cdf((centrado - medio_paso) / desviacion)
    masas = np.where(np.abs(centrado) <= radio + _HOLGURA_RADIO, masas, 0.0)
    retenida = masas.sum(axis=1)
    if np.any(retenida <= 0):
        fila = int(np.argmin(retenida))
        raise RejillaInvalidaError(f"el núcleo del estado {fila} no retiene masa dentro del radio {radio}")
    return masas / retenida[:, None]


def brownian_kernel(x: float, t, grid: EspacioEstados, truncation_radius: float) -> DistribucionDiscreta:
    """
    Núcleo browniano P_t(x, ·) = N(x, t) discretizado sobre la rejilla.

    Raises:
        TiempoInvalidoError: Si t ≤ 0.
        RejillaInvalidaError: Si la rejilla no es uniforme o no retiene masa.
    """
    tiempo = _tiempo_positivo(t)
    _exigir_rejilla_uniforme(grid)
    desviacion = math.sqrt(tiempo)
    radio = max(truncation_radius, 4.0 * desviacion)
    return DistribucionDiscreta.desde_vector(matriz_gaussiana(np.array([x]), desviacion, grid, radio)[0])


def _momentos_ornstein_uhlenbeck(tiempo: float, theta: float, sigma: float) -> tuple[float, float]:
    decaimiento = math.exp(-theta * tiempo)
    varianza = sigma ** 2 * (1.0 - math.exp(-2.0 * theta * tiempo)) / (2.0 * theta)
    return decaimiento, math.sqrt(varianza)


def ornstein_uhlenbeck_kernel(
    x: float, t, grid: EspacioEstados, theta: float, sigma: float, truncation_radius: float
) -> DistribucionDiscreta:
    """Transición gaussiana exacta de dX = −θX dt + σ dB, discretizada como brownian_kernel."""
    tiempo = _tiempo_positivo(t)
    _exigir_rejilla_uniforme(grid)
    if theta <= 0 or sigma <= 0:
        raise ConfiguracionInvalidaError(f"Ornstein-Uhlenbeck requiere θ > 0 y σ > 0 (θ={theta}, σ={sigma})")
    decaimiento, desviacion = _momentos_ornstein_uhlenbeck(tiempo, theta, sigma)
    radio = max(truncation_radius, 4.0 * desviacion)
    return DistribucionDiscreta.desde_vector(
        matriz_gaussiana(np.array([x * decaimiento]), desviacion, grid, radio)[0]
    )


class ProcesoServicio:
    """
    Servicio de aplicación que construye modelos de proceso y expone sus núcleos.
    """

    def build_model(self, spec: ProcesoEsquema) -> ModeloProceso:
        """
        Construye un modelo a partir del bloque `process` del documento de configuración.

        Raises:
            ConfiguracionInvalidaError: Si el bloque es incoherente.
            HonestidadError: Si alguna fila de la matriz de la cadena no suma 1.
        """
        tipo = TipoProceso(spec.kind)
        if tipo == TipoProceso.CADENA_FINITA:
            matriz = np.asarray(spec.matrix, dtype=float)
            espacio = EspacioEstados.etiquetas_enteras(matriz.shape[0], spec.labels or ())
            observable = self.construir_observable(spec.observable, espacio)
            modelo = self.modelo_cadena(matriz, observable, Fraction(spec.chain_step), espacio)
        else:
            espacio = EspacioEstados.rejilla_uniforme(spec.grid.min, spec.grid.max, spec.grid.step)
            observable = self.construir_observable(spec.observable, espacio)
            if tipo == TipoProceso.BROWNIANO:
                modelo = self.modelo_browniano(espacio, observable, spec.truncation_radius)
            else:
                modelo = self.modelo_ornstein_uhlenbeck(
                    espacio, observable, spec.theta, spec.sigma, spec.truncation_radius
                )
        logger.info(f"Modelo construido: {modelo!r}")
        return modelo

    @staticmethod
    def construir_observable(spec: ObservableEsquema, espacio: EspacioEstados) -> Observable:
        """Observable por valores explícitos o por fórmula con nombre."""
        puntos = np.asarray(espacio.points)
        if spec.values is not None:
            if len(spec.values) != espacio.n:
                raise ConfiguracionInvalidaError(
                    f"El observable tiene {len(spec.values)} valores y hay {espacio.n} estados"
                )
            return Observable(np.asarray(spec.values, dtype=float))
        a, b = spec.interval if spec.interval is not None else (float(puntos.min()), float(puntos.max()))
        if spec.formula == "indicator-interval":
            return Observable(((puntos >= a) & (puntos <= b)).astype(float))
        if b <= a:
            raise ConfiguracionInvalidaError(f"clamp-linear requiere a < b (a={a}, b={b})")
        return Observable(np.clip((puntos - a) / (b - a), 0.0, 1.0))

    @staticmethod
    def modelo_cadena(
        matriz: np.ndarray,
        observable: Observable,
        paso: Fraction = Fraction(1),
        espacio: Optional[EspacioEstados] = None,
    ) -> ModeloProceso:
        """
        Cadena finita con matriz estocástica M y paso Δt: P_{kΔt} = M^k.

        Raises:
            HonestidadError: Si alguna fila de M no suma 1.
        """
        transicion = np.array(matriz, dtype=float)
        comprobar_honestidad(transicion, "la matriz de transición")
        if paso <= 0:
            raise ConfiguracionInvalidaError(f"El paso de la cadena debe ser positivo y es {paso}")
        espacio = espacio or EspacioEstados.etiquetas_enteras(transicion.shape[0])

        def generador(tiempo: Fraction) -> np.ndarray:
            pasos = tiempo / paso
            if pasos.denominator != 1:
                raise TiempoNoSoportadoError(tiempo, f"no es múltiplo del paso de la cadena {paso}")
            return np.linalg.matrix_power(transicion, int(pasos))

        transicion.setflags(write=False)
        return ModeloProceso(
            space=espacio,
            observable=observable,
            kind=TipoProceso.CADENA_FINITA,
            generador=generador,
            matriz_transicion=transicion,
            paso_cadena=Fraction(paso),
        )

    @staticmethod
    def modelo_browniano(espacio: EspacioEstados, observable: Observable, radio: float = 5.0) -> ModeloProceso:
        _exigir_rejilla_uniforme(espacio)
        puntos = np.asarray(espacio.points)

        def generador(tiempo: Fraction) -> np.ndarray:
            desviacion = math.sqrt(float(tiempo))
            return matriz_gaussiana(puntos, desviacion, espacio, max(radio, 4.0 * desviacion))

        return ModeloProceso(
            space=espacio,
            observable=observable,
            kind=TipoProceso.BROWNIANO,
            generador=generador,
            parametros={"truncation_radius": radio},
        )

    @staticmethod
    def modelo_ornstein_uhlenbeck(
        espacio: EspacioEstados, observable: Observable, theta: float, sigma: float, radio: float = 5.0
    ) -> ModeloProceso:
        _exigir_rejilla_uniforme(espacio)
        if theta is None or sigma is None or theta <= 0 or sigma <= 0:
            raise ConfiguracionInvalidaError(f"Ornstein-Uhlenbeck requiere θ > 0 y σ > 0 (θ={theta}, σ={sigma})")
        puntos = np.asarray(espacio.points)

        def generador(tiempo: Fraction) -> np.ndarray:
            decaimiento, desviacion = _momentos_ornstein_uhlenbeck(float(tiempo), theta, sigma)
            return matriz_gaussiana(puntos * decaimiento, desviacion, espacio, max(radio, 4.0 * desviacion))

        return ModeloProceso(
            space=espacio,
            observable=observable,
            kind=TipoProceso.ORNSTEIN_UHLENBECK,
            generador=generador,
            parametros={"theta": theta, "sigma": sigma, "truncation_radius": radio},
        )

    @staticmethod
    def kernel_matrix(model: ModeloProceso, t) -> np.ndarray:
        """Matriz n×n cuya fila x es kernel(t, x)."""
        return model.matriz_nucleo(t)

    @staticmethod
    def semigroup_check(model: ModeloProceso, s, t) -> float:
        """Máxima desviación entre P_{s+t} y P_s·P_t."""
        compuesta = model.matriz_nucleo(s) @ model.matriz_nucleo(t)
        return float(np.abs(model.matriz_nucleo(Fraction(s) + Fraction(t)) - compuesta).max())

    @staticmethod
    def variacion_total_vecinos(model: ModeloProceso, t, x: int) -> float:
        """Distancia en variación total entre kernel(t, x) y kernel(t, x+1)."""
        matriz = model.matriz_nucleo(t)
        return 0.5 * float(np.abs(matriz[x] - matriz[x + 1]).sum())
