# app/servicios/validacion_servicio.py
import logging
from fractions import Fraction
from itertools import combinations
import numpy as np

from app.core.config import settings
from app.dominio.entidades.informes import Chequeo, InformePuntoFijo
from app.dominio.entidades.modelo_proceso import ModeloProceso, TipoProceso
from app.dominio.excepciones.dominio_excepciones import (
    EnumeracionDemasiadoGrandeError,
    HonestidadError,
    PrecondicionFallidaError,
    ViolacionInvarianteError,
)
from app.dominio.objetos_valor.matriz_pseudometrica import MatrizPseudometrica, violacion_pseudometrica
from app.dominio.objetos_valor.rejilla_temporal import RejillaTemporal
from app.dominio.objetos_valor.transporte import MatrizCosto
from app.esquemas.configuracion import ConfiguracionEjecucion
from app.servicios.discretizacion_servicio import build_time_grid
from app.servicios.metrica_servicio import MetricaServicio
from app.servicios.proceso_servicio import ProcesoServicio
from app.servicios.transporte_servicio import TransporteServicio

logger = logging.getLogger(__name__)

# Tiempos positivos de la rejilla sobre los que se comprueba el transporte.
_TIEMPOS_TRANSPORTE = 3


class ValidacionServicio:
    """
    Batería de invariantes sobre la instancia configurada.

    Cada comprobación produce un Chequeo; ninguna lanza por un invariante
    incumplido, para que el informe enumere todas las violaciones.
    """
    def __init__(self, proceso: ProcesoServicio, transporte: TransporteServicio, metrica: MetricaServicio):
        self.proceso = proceso
        self.transporte = transporte
        self.metrica = metrica

    def validate(self, config: ConfiguracionEjecucion) -> list[Chequeo]:
        """Ejecuta la batería completa y devuelve los chequeos en orden."""
        try:
            model = self.proceso.build_model(config.process)
        except HonestidadError as e:
            logger.warning(f"Honestidad violada: {e}")
            return [Chequeo("honestidad", False, e.masa, str(e))]

        tolerancias = config.tolerances
        c = config.discount
        tg = build_time_grid(c, tolerancias.epsilon_time, Fraction(tolerancias.time_step))
        chequeos = [self._honestidad(model, tg)]
        if model.kind == TipoProceso.CADENA_FINITA and len(tg) > 1:
            chequeos.append(self._semigrupo(model, tg))
        chequeos.extend(self._transporte(model, tg))

        puntos_fijos: dict[str, InformePuntoFijo] = {}
        for funcional in config.funcionales:
            try:
                informe = self.metrica.iterate_to_fixpoint(
                    funcional, model, tg, c, tolerancias.epsilon_fixpoint, tolerancias.max_iter,
                    config.modo_trayectorias,
                )
            except EnumeracionDemasiadoGrandeError as e:
                chequeos.append(Chequeo(f"punto fijo {funcional}", False, float(e.tamano), str(e)))
                continue
            puntos_fijos[funcional] = informe
            chequeos.extend(self._punto_fijo(informe, tolerancias.epsilon_fixpoint))
            chequeos.extend(self._expansividad_y_monotonia(funcional, informe, model, tg, c, config))

        if "F" in puntos_fijos and "G" in puntos_fijos:
            chequeos.extend(self._orden(puntos_fijos["F"], puntos_fijos["G"], model, tg, c))

        fallidos = [ch for ch in chequeos if not ch.pasa]
        logger.info(f"Validación: {len(chequeos) - len(fallidos)}/{len(chequeos)} chequeos superados")
        return chequeos

    # --- Proceso ---

    @staticmethod
    def _honestidad(model: ModeloProceso, tg: RejillaTemporal) -> Chequeo:
        peor = 0.0
        try:
            for t in tg.times:
                peor = max(peor, float(np.abs(model.matriz_nucleo(t).sum(axis=1) - 1.0).max()))
        except HonestidadError as e:
            return Chequeo("honestidad", False, e.masa, str(e))
        return Chequeo("honestidad", True, peor, f"max |Σ_y P_t(x, y) − 1| = {peor:.3e}")

    def _semigrupo(self, model: ModeloProceso, tg: RejillaTemporal) -> Chequeo:
        paso = tg.paso
        desviacion = max(self.proceso.semigroup_check(model, paso, t) for t in tg.times[1:])
        return Chequeo(
            "semigrupo P_{s+t} = P_s P_t",
            desviacion <= settings.PSEUDOMETRIC_TOLERANCE,
            desviacion,
            f"s = {paso}, desviación máxima {desviacion:.3e}",
        )

    # --- Transporte ---

    def _transporte(self, model: ModeloProceso, tg: RejillaTemporal) -> list[Chequeo]:
        costo = MatrizCosto(self.metrica.obs_metric(model).values)
        peor_brecha = peor_lipschitz = peor_marginal = 0.0
        validos = True
        for t in tg.times[1:_TIEMPOS_TRANSPORTE + 1]:
            for x, y in combinations(range(model.n), 2):
                mu, nu = model.kernel(t, x), model.kernel(t, y)
                resultado = self.transporte.solve_ot(mu, nu, costo)
                informe = self.transporte.verify_duality(resultado, mu, nu, costo)
                validos = validos and informe.valido
                peor_brecha = max(peor_brecha, informe.brecha)
                peor_lipschitz = max(peor_lipschitz, informe.violacion_lipschitz)
                peor_marginal = max(peor_marginal, informe.desviacion_marginal)
        return [
            Chequeo(
                "marginales del acoplamiento",
                peor_marginal <= settings.MARGINAL_TOLERANCE,
                peor_marginal,
                f"desviación máxima {peor_marginal:.3e}",
            ),
            Chequeo(
                "dualidad de Kantorovich",
                validos,
                max(peor_brecha, peor_lipschitz),
                f"brecha {peor_brecha:.3e}, violación de Lipschitz {peor_lipschitz:.3e}",
            ),
        ]

    # --- Funcionales ---

    @staticmethod
    def _pseudometrica(nombre: str, matriz: MatrizPseudometrica) -> Chequeo:
        violacion, axioma = violacion_pseudometrica(np.asarray(matriz.values))
        return Chequeo(
            f"pseudométrica ({nombre})",
            violacion <= settings.PSEUDOMETRIC_TOLERANCE,
            violacion,
            f"axioma más violado: {axioma}",
        )

    def _punto_fijo(self, informe: InformePuntoFijo, epsilon_fix: float) -> list[Chequeo]:
        crecientes = all(
            a.exceso_sobre(b)[0] <= settings.PSEUDOMETRIC_TOLERANCE
            for a, b in zip(informe.iterates, informe.iterates[1:])
        )
        cota = max(2 * epsilon_fix, informe.ruido_muestreo)
        return [
            self._pseudometrica(f"{informe.funcional}, iterado final", informe.final),
            Chequeo(f"iterados crecientes ({informe.funcional})", crecientes, 0.0, f"{informe.iteraciones} iteraciones"),
            Chequeo(
                f"residuo del punto fijo ({informe.funcional})",
                informe.converged and informe.residual <= cota,
                informe.residual,
                f"‖{informe.funcional}(final) − final‖ = {informe.residual:.3e} (cota {cota:.3e})",
            ),
        ]

    def _expansividad_y_monotonia(
        self,
        funcional: str,
        informe: InformePuntoFijo,
        model: ModeloProceso,
        tg: RejillaTemporal,
        c: float,
        config: ConfiguracionEjecucion,
    ) -> list[Chequeo]:
        aplicar = self.metrica.aplicador(funcional, model, tg, c, config.modo_trayectorias)
        m = informe.iterates[0]
        base = np.asarray(model.space.base_metric)
        mayor = MatrizPseudometrica(np.minimum(1.0, m.values + 0.5 * base))
        imagen, imagen_mayor = aplicar(m), aplicar(mayor)

        expansion, _ = m.exceso_sobre(imagen)
        monotonia, ubicacion = imagen.exceso_sobre(imagen_mayor)
        tolerancia = settings.PSEUDOMETRIC_TOLERANCE
        return [
            self._pseudometrica(f"{funcional}(δ_0)", imagen),
            Chequeo(
                f"expansividad m ≤ {funcional}(m)",
                expansion <= tolerancia,
                max(0.0, expansion),
                f"max(m − {funcional}(m)) = {expansion:.3e}",
            ),
            Chequeo(
                f"monotonía de {funcional}",
                monotonia <= tolerancia,
                max(0.0, monotonia),
                f"max({funcional}(m) − {funcional}(m′)) = {monotonia:.3e} en {ubicacion}",
            ),
        ]

    def _orden(
        self, informe_f: InformePuntoFijo, informe_g: InformePuntoFijo, model: ModeloProceso, tg: RejillaTemporal, c: float
    ) -> list[Chequeo]:
        orden = self.metrica.check_ordering(informe_f.final, informe_g.final)
        chequeos = [
            Chequeo(
                "orden δ̄ ≤ d̄",
                orden.pasa,
                orden.violacion_maxima,
                f"{orden.resumen} (tolerancia {orden.tolerancia:.1e}, par {orden.ubicacion})",
            )
        ]
        if informe_g.ruido_muestreo == 0.0:
            chequeos.append(self.metrica.check_fixpoint_transfer(informe_g.final, model, tg, c))
            chequeos.append(self._menor_punto_fijo(informe_f.final, informe_g.final, model, tg, c))
        return chequeos

    def _menor_punto_fijo(
        self,
        delta_bar: MatrizPseudometrica,
        candidato: MatrizPseudometrica,
        model: ModeloProceso,
        tg: RejillaTemporal,
        c: float,
    ) -> Chequeo:
        try:
            return self.metrica.check_least_fixpoint(delta_bar, candidato, model, tg, c)
        except PrecondicionFallidaError as e:
            return Chequeo("menor punto fijo", False, 0.0, str(e))


def exigir_validacion(chequeos: list[Chequeo]) -> None:
    """
    Raises:
        ViolacionInvarianteError: Con la lista de violaciones si algún chequeo falla.
    """
    fallidos = [f"{ch.nombre}: {ch.detalle}" for ch in chequeos if not ch.pasa]
    if fallidos:
        raise ViolacionInvarianteError(f"{len(fallidos)} invariantes violados", violaciones=fallidos)
