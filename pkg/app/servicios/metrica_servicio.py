# app/servicios/metrica_servicio.py
import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from app.core.config import settings
from app.dominio.entidades.conjunto_trayectorias import ConjuntoTrayectorias
from app.dominio.entidades.informes import Chequeo, InformeOrden, InformePuntoFijo
from app.dominio.entidades.modelo_proceso import ModeloProceso
from app.dominio.excepciones.dominio_excepciones import (
    ConfiguracionInvalidaError,
    PrecondicionFallidaError,
    TiempoNoSoportadoError,
)
from app.dominio.objetos_valor.distribucion import DistribucionDiscreta
from app.dominio.objetos_valor.matriz_pseudometrica import MatrizPseudometrica
from app.dominio.objetos_valor.modo_trayectorias import ModoTrayectorias
from app.dominio.objetos_valor.rejilla_temporal import Racional, RejillaTemporal
from app.dominio.objetos_valor.transporte import MatrizCosto
from app.servicios.discretizacion_servicio import build_time_grid, rejilla_refinada, validar_descuento
from app.servicios.transporte_servicio import TransporteServicio
from app.servicios.trayectorias_servicio import TrayectoriasServicio, semilla_derivada

logger = logging.getLogger(__name__)

FUNCIONALES = ("F", "G")

Aplicador = Callable[[MatrizPseudometrica], MatrizPseudometrica]


def discounted_uniform_cost(
    m: MatrizPseudometrica, paths_a: np.ndarray, paths_b: np.ndarray, tg: RejillaTemporal, c: float
) -> np.ndarray:
    """
    U_c(m)(ω, ω′) = max_t c^t · m(ω(t), ω′(t)) entre dos listas de trayectorias.

    Args:
        paths_a: Matriz k × len(tg) de índices de estado.
        paths_b: Matriz k′ × len(tg) de índices de estado.

    Returns:
        Matriz k × k′ de costes en [0, 1].
    """
    caminos_a = np.atleast_2d(np.asarray(paths_a, dtype=np.int64))
    caminos_b = np.atleast_2d(np.asarray(paths_b, dtype=np.int64))
    if caminos_a.shape[1] != len(tg) or caminos_b.shape[1] != len(tg):
        raise ConfiguracionInvalidaError("las trayectorias deben tener un estado por tiempo de la rejilla")
    costes = np.zeros((caminos_a.shape[0], caminos_b.shape[0]))
    for i, descuento in enumerate(tg.descuentos(c)):
        np.maximum(costes, descuento * m.values[np.ix_(caminos_a[:, i], caminos_b[:, i])], out=costes)
    return costes


def _conjunto_base(
    a: ConjuntoTrayectorias, b: ConjuntoTrayectorias
) -> tuple[np.ndarray, DistribucionDiscreta, DistribucionDiscreta]:
    """Trayectorias distintas de ambos conjuntos y los pesos de cada uno sobre ellas."""
    caminos, inversa = np.unique(np.vstack([a.trajectories, b.trajectories]), axis=0, return_inverse=True)
    inversa = inversa.reshape(-1)
    corte = len(a)
    pesos_a = np.bincount(inversa[:corte], weights=a.weights, minlength=len(caminos))
    pesos_b = np.bincount(inversa[corte:], weights=b.weights, minlength=len(caminos))
    return caminos, DistribucionDiscreta.desde_vector(pesos_a), DistribucionDiscreta.desde_vector(pesos_b)


class MetricaServicio:
    """
    Servicio de aplicación para las pseudométricas de comportamiento.

    Implementa los funcionales F_c (sobre núcleos) y G_c (sobre trayectorias)
    y la iteración δ_0 ≤ δ_1 ≤ … hasta su punto fijo.
    """
    def __init__(
        self,
        transporte: TransporteServicio,
        trayectorias: TrayectoriasServicio,
        max_workers: Optional[int] = None,
    ):
        """
        Args:
            transporte: Servicio de transporte óptimo.
            trayectorias: Servicio de enumeración y muestreo de trayectorias.
            max_workers: Hilos para repartir los pares de estados (1 = secuencial).
        """
        self.transporte = transporte
        self.trayectorias = trayectorias
        self.max_workers = settings.MAX_WORKERS if max_workers is None else max_workers

    def _por_pares(self, n: int, calcular: Callable[[tuple[int, int]], float]) -> np.ndarray:
        """Evalúa `calcular` en cada par x < y y devuelve la matriz simétrica."""
        pares = list(combinations(range(n), 2))
        if self.max_workers and self.max_workers > 1 and len(pares) > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as ejecutor:
                valores = list(ejecutor.map(calcular, pares))
        else:
            valores = [calcular(par) for par in pares]
        matriz = np.zeros((n, n))
        for (x, y), valor in zip(pares, valores):
            matriz[x, y] = matriz[y, x] = valor
        return matriz

    @staticmethod
    def obs_metric(model: ModeloProceso) -> MatrizPseudometrica:
        """δ_0(x, y) = |obs(x) − obs(y)|."""
        valores = model.observable.values
        return MatrizPseudometrica(np.abs(valores[:, None] - valores[None, :]))

    def apply_F(self, m: MatrizPseudometrica, model: ModeloProceso, tg: RejillaTemporal, c: float) -> MatrizPseudometrica:
        """
        F_c(m)(x, y) = max_{t ∈ tg} c^t · W(m)(P_t(x), P_t(y)).

        El término t = 0 compara deltas de Dirac y vale m(x, y); como W ≤ max m,
        un tiempo con c^t·max m ≤ mejor valor no puede mejorarlo y se corta ahí.
        """
        validar_descuento(c)
        costo = MatrizCosto(m.values)
        maximo = float(m.values.max(initial=0.0))
        descuentos = tg.descuentos(c)
        nucleos = [[model.kernel(t, x) for x in range(model.n)] for t in tg.times]

        def calcular(par: tuple[int, int]) -> float:
            x, y = par
            mejor = float(m.values[x, y])
            for i in range(1, len(tg)):
                if descuentos[i] * maximo <= mejor:
                    break
                resultado = self.transporte.solve_ot(nucleos[i][x], nucleos[i][y], costo)
                mejor = max(mejor, descuentos[i] * resultado.cost)
            return mejor

        return MatrizPseudometrica(self._por_pares(model.n, calcular))

    def apply_G(
        self,
        m: MatrizPseudometrica,
        model: ModeloProceso,
        tg: RejillaTemporal,
        c: float,
        path_mode: Optional[ModoTrayectorias] = None,
        ensembles: Optional[Sequence[ConjuntoTrayectorias]] = None,
        estimate_noise: bool = False,
    ) -> MatrizPseudometrica:
        """
        G_c(m)(x, y) = W(U_c(m))(ℙ^x, ℙ^y) con ℙ^x restringida a la rejilla.

        Args:
            path_mode: Exacto o Monte Carlo; por defecto exacto.
            ensembles: Conjuntos de trayectorias por estado ya obtenidos; si se
                pasan se reutilizan y path_mode solo se usa para el ruido.
            estimate_noise: En Monte Carlo, repite el cálculo con
                settings.MC_NOISE_SEEDS semillas y guarda la semiamplitud del rango.

        Raises:
            EnumeracionDemasiadoGrandeError: En modo exacto si la enumeración supera el tope.
        """
        validar_descuento(c)
        modo = path_mode or ModoTrayectorias.exacto()
        if ensembles is None:
            ensembles = self.trayectorias.ensembles_for(model, tg, modo)
        if len(ensembles) != model.n:
            raise ConfiguracionInvalidaError(f"Se esperaban {model.n} conjuntos de trayectorias y hay {len(ensembles)}")

        valores = self._aplicar_G(m, ensembles, tg, c, model.n)
        ruido = 0.0
        if estimate_noise and modo.es_monte_carlo:
            ruido = self.sampling_noise(m, model, tg, c, modo)
        return MatrizPseudometrica(valores, ruido_muestreo=ruido)

    def _aplicar_G(
        self, m: MatrizPseudometrica, ensembles: Sequence[ConjuntoTrayectorias], tg: RejillaTemporal, c: float, n: int
    ) -> np.ndarray:
        def calcular(par: tuple[int, int]) -> float:
            x, y = par
            caminos, mu, nu = _conjunto_base(ensembles[x], ensembles[y])
            costo = MatrizCosto(discounted_uniform_cost(m, caminos, caminos, tg, c))
            return self.transporte.solve_ot(mu, nu, costo).cost

        return self._por_pares(n, calcular)

    def sampling_noise(
        self, m: MatrizPseudometrica, model: ModeloProceso, tg: RejillaTemporal, c: float, modo: ModoTrayectorias
    ) -> float:
        """Semiamplitud máxima, sobre los pares, de G_c(m) calculado con semillas independientes."""
        replicas = []
        for k in range(settings.MC_NOISE_SEEDS):
            replica = modo.con_semilla(semilla_derivada(modo.semilla, model.n + k))
            conjuntos = self.trayectorias.ensembles_for(model, tg, replica)
            replicas.append(self._aplicar_G(m, conjuntos, tg, c, model.n))
        pila = np.stack(replicas)
        ruido = float((pila.max(axis=0) - pila.min(axis=0)).max(initial=0.0) / 2.0)
        logger.info(f"Ruido de muestreo estimado con {settings.MC_NOISE_SEEDS} semillas: {ruido:.3e}")
        return ruido

    def aplicador(
        self,
        functional: str,
        model: ModeloProceso,
        tg: RejillaTemporal,
        c: float,
        path_mode: Optional[ModoTrayectorias],
    ) -> Aplicador:
        if functional == "F":
            return lambda m: self.apply_F(m, model, tg, c)
        if functional == "G":
            modo = path_mode or ModoTrayectorias.exacto()
            # Una sola muestra por estado para toda la ejecución: G sigue siendo monótono.
            conjuntos = self.trayectorias.ensembles_for(model, tg, modo)
            return lambda m: self.apply_G(m, model, tg, c, modo, conjuntos)
        raise ConfiguracionInvalidaError(f"Funcional desconocido: '{functional}' (use F o G)")

    def iterate_to_fixpoint(
        self,
        functional: str,
        model: ModeloProceso,
        tg: RejillaTemporal,
        c: float,
        epsilon_fix: Optional[float] = None,
        max_iter: Optional[int] = None,
        path_mode: Optional[ModoTrayectorias] = None,
    ) -> InformePuntoFijo:
        """
        Itera el funcional desde δ_0 = obs_metric hasta que el cambio en norma
        del supremo sea ≤ epsilon_fix o se alcance max_iter.

        Los iterados son las aplicaciones sucesivas del funcional, sin recortes.
        Un iterado que decrece más que PSEUDOMETRIC_TOLERANCE se registra como
        advertencia y hace fallar el chequeo de iterados crecientes de `validate`.
        No converger no es un error: el informe queda con converged=False.
        """
        validar_descuento(c)
        epsilon = settings.EPSILON_FIXPOINT if epsilon_fix is None else epsilon_fix
        limite = settings.MAX_ITER if max_iter is None else max_iter
        if epsilon <= 0 or limite < 1:
            raise ConfiguracionInvalidaError("epsilon_fix debe ser positivo y max_iter ≥ 1")
        aplicar = self.aplicador(functional, model, tg, c, path_mode)

        actual = self.obs_metric(model)
        iterados, deltas = [actual], []
        convergio = False
        logger.info(f"Iteración de {functional}_c con c={c} sobre {len(tg)} tiempos y {model.n} estados")
        for k in range(limite):
            siguiente = aplicar(actual)
            descenso, ubicacion = actual.exceso_sobre(siguiente)
            if descenso > settings.PSEUDOMETRIC_TOLERANCE:
                logger.warning(
                    f"{functional} iteración {k + 1}: el iterado decrece {descenso:.3e} en el par {ubicacion}"
                )
            delta = siguiente.distancia_sup(actual)
            logger.debug(f"{functional} iteración {k + 1}: Δ = {delta:.3e}")
            iterados.append(siguiente)
            deltas.append(delta)
            actual = siguiente
            if delta <= epsilon:
                convergio = True
                break

        if functional == "G" and path_mode is not None and path_mode.es_monte_carlo:
            residuo = self.apply_G(actual, model, tg, c, path_mode, estimate_noise=True)
        else:
            residuo = aplicar(actual)
        residual = residuo.distancia_sup(actual)

        if convergio:
            logger.info(f"{functional}_c convergió en {len(deltas)} iteraciones (residuo {residual:.3e})")
        else:
            logger.warning(f"{functional}_c no convergió en {limite} iteraciones (último Δ = {deltas[-1]:.3e})")

        return InformePuntoFijo(
            funcional=functional,
            iterates=iterados,
            deltas=deltas,
            residual=residual,
            converged=convergio,
            configuracion={
                "c": c,
                "tiempos": [str(t) for t in tg.times],
                "epsilon_fixpoint": epsilon,
                "max_iter": limite,
                "path_mode": str(path_mode or ModoTrayectorias.exacto()) if functional == "G" else None,
            },
            ruido_muestreo=residuo.ruido_muestreo,
        )

    @staticmethod
    def check_ordering(
        delta_bar: MatrizPseudometrica, d_bar: MatrizPseudometrica, tol: float = 1e-6
    ) -> InformeOrden:
        """
        Comprueba δ̄ ≤ d̄ entrada a entrada.

        La tolerancia efectiva nunca es menor que el ruido de muestreo de d̄.
        """
        if delta_bar.n != d_bar.n:
            raise ConfiguracionInvalidaError(f"Las matrices tienen tamaños distintos: {delta_bar.n} y {d_bar.n}")
        tolerancia = max(tol, d_bar.ruido_muestreo)
        exceso, ubicacion = delta_bar.exceso_sobre(d_bar)
        pasa = exceso <= tolerancia
        if not pasa:
            logger.warning(f"δ̄ supera a d̄ en {exceso:.3e} en el par {ubicacion}")
        return InformeOrden(
            pasa=pasa,
            violacion_maxima=max(0.0, exceso),
            ubicacion=ubicacion if exceso > 0 else None,
            tolerancia=tolerancia,
        )

    def check_fixpoint_transfer(
        self, d_bar: MatrizPseudometrica, model: ModeloProceso, tg: RejillaTemporal, c: float, tol: float = 2e-6
    ) -> Chequeo:
        """Un punto fijo de G_c también lo es de F_c: ‖F_c(d̄) − d̄‖ ≤ tol."""
        distancia = self.apply_F(d_bar, model, tg, c).distancia_sup(d_bar)
        return Chequeo(
            nombre="transferencia de punto fijo G → F",
            pasa=distancia <= tol,
            valor=distancia,
            detalle=f"‖F(d̄) − d̄‖ = {distancia:.3e}",
        )

    def check_least_fixpoint(
        self,
        delta_bar: MatrizPseudometrica,
        candidate: MatrizPseudometrica,
        model: ModeloProceso,
        tg: RejillaTemporal,
        c: float,
        tol: float = 1e-6,
    ) -> Chequeo:
        """
        δ̄ es el menor punto prefijo de F_c por encima de δ_0.

        Raises:
            PrecondicionFallidaError: Si el candidato no cumple δ_0 ≤ candidato
                y F_c(candidato) ≤ candidato.
        """
        debajo, _ = self.obs_metric(model).exceso_sobre(candidate)
        exceso_prefijo, _ = self.apply_F(candidate, model, tg, c).exceso_sobre(candidate)
        if debajo > tol or exceso_prefijo > tol:
            raise PrecondicionFallidaError(
                f"el candidato no es un punto prefijo sobre δ_0 (δ_0 − m ≤ {debajo:.3e}, F(m) − m ≤ {exceso_prefijo:.3e})"
            )
        exceso, ubicacion = delta_bar.exceso_sobre(candidate)
        return Chequeo(
            nombre="menor punto fijo",
            pasa=exceso <= tol,
            valor=max(0.0, exceso),
            detalle=f"max(δ̄ − m) = {exceso:.3e} en {ubicacion}",
        )

    def discount_sweep(
        self,
        model: ModeloProceso,
        discounts: Sequence[float],
        functional: str,
        epsilon_time: Optional[float] = None,
        time_step: Racional = 1,
        epsilon_fix: Optional[float] = None,
        max_iter: Optional[int] = None,
        path_mode: Optional[ModoTrayectorias] = None,
    ) -> list[tuple[float, InformePuntoFijo]]:
        """Punto fijo para cada descuento, en orden creciente de c."""
        epsilon_tiempo = settings.EPSILON_TIME if epsilon_time is None else epsilon_time
        informes = []
        for c in sorted(discounts):
            tg = build_time_grid(c, epsilon_tiempo, time_step)
            informes.append((c, self.iterate_to_fixpoint(functional, model, tg, c, epsilon_fix, max_iter, path_mode)))
        return informes

    def step_sensitivity(
        self,
        functional: str,
        model: ModeloProceso,
        c: float,
        epsilon_time: Optional[float] = None,
        time_step: Racional = 1,
        epsilon_fix: Optional[float] = None,
        max_iter: Optional[int] = None,
        path_mode: Optional[ModoTrayectorias] = None,
    ) -> float:
        """
        Distancia del supremo entre los puntos fijos con paso `time_step` y `time_step/2`.

        Raises:
            PrecondicionFallidaError: Si el modelo no admite el paso refinado.
        """
        epsilon_tiempo = settings.EPSILON_TIME if epsilon_time is None else epsilon_time
        tg = build_time_grid(c, epsilon_tiempo, time_step)
        refinada = rejilla_refinada(tg)
        try:
            gruesa = self.iterate_to_fixpoint(functional, model, tg, c, epsilon_fix, max_iter, path_mode)
            fina = self.iterate_to_fixpoint(functional, model, refinada, c, epsilon_fix, max_iter, path_mode)
        except TiempoNoSoportadoError as e:
            raise PrecondicionFallidaError(f"el modelo no admite el paso {refinada.paso}: {e}") from e
        sensibilidad = gruesa.final.distancia_sup(fina.final)
        logger.info(f"Sensibilidad al paso ({tg.paso} → {refinada.paso}): {sensibilidad:.3e}")
        return sensibilidad
