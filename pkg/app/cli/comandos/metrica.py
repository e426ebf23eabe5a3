# app/cli/comandos/metrica.py
import argparse
import logging
from fractions import Fraction

from app.cli.comandos.barrido import CABECERA_BARRIDO, barrer, filas_barrido
from app.cli.comandos.contexto import ContextoEjecucion
from app.cli.opciones import interruptor_config, opcion_config
from app.core.deps import get_escritor, get_metrica_servicio
from app.dominio.entidades.informes import InformePuntoFijo
from app.dominio.excepciones.dominio_excepciones import PrecondicionFallidaError
from app.esquemas.configuracion import ConfiguracionEjecucion
from app.esquemas.informes import InformeOrdenLeer, InformePuntoFijoLeer
from app.servicios.metrica_servicio import MetricaServicio

logger = logging.getLogger(__name__)


def registrar(subparsers: argparse._SubParsersAction, comun: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "metric", parents=[comun], help="itera F_c y/o G_c hasta el punto fijo"
    )
    interruptor_config(
        parser, "--step-sensitivity", "step_sensitivity",
        help="repite con la mitad del paso temporal e informa la diferencia",
    )
    opcion_config(
        parser, "--discounts", "discounts", type=float, nargs="+",
        help="además, datos de gráfico del valor por par frente a c",
    )
    parser.set_defaults(comando=cmd_metric)


def _sensibilidad(metrica: MetricaServicio, contexto: ContextoEjecucion, informe: InformePuntoFijo) -> None:
    config = contexto.config
    try:
        informe.sensibilidad_paso = metrica.step_sensitivity(
            informe.funcional,
            contexto.model,
            config.discount,
            config.tolerances.epsilon_time,
            Fraction(config.tolerances.time_step),
            config.tolerances.epsilon_fixpoint,
            config.tolerances.max_iter,
            contexto.modo_g,
        )
    except PrecondicionFallidaError as e:
        logger.warning(f"Sensibilidad al paso omitida para {informe.funcional}: {e}")


def cmd_metric(config: ConfiguracionEjecucion, args: argparse.Namespace) -> int:
    """
    Escribe, por funcional, el informe de punto fijo, la matriz final y la
    curva de convergencia; el informe de orden cuando corren F y G.

    No converger no cambia el código de salida: el informe lo indica con converged=false.
    """
    contexto = ContextoEjecucion.desde_config(config)
    metrica = get_metrica_servicio()

    informes: dict[str, InformePuntoFijo] = {}
    for funcional in config.funcionales:
        informe = metrica.iterate_to_fixpoint(
            funcional,
            contexto.model,
            contexto.tg,
            config.discount,
            config.tolerances.epsilon_fixpoint,
            config.tolerances.max_iter,
            contexto.modo_g,
        )
        if config.step_sensitivity:
            _sensibilidad(metrica, contexto, informe)
        informes[funcional] = informe

    resultados_barrido = barrer(contexto, config.discounts) if config.discounts else []

    with get_escritor(config.out_dir) as escritor:
        for funcional, informe in informes.items():
            escritor.escribir_json(
                f"punto_fijo_{funcional}.json",
                InformePuntoFijoLeer.desde_dominio(informe, contexto.etiquetas),
            )
            escritor.escribir_matriz(f"matriz_{funcional}.csv", informe.final, contexto.etiquetas)
            escritor.escribir_tabla(
                f"convergencia_{funcional}.csv",
                ["iteration", "delta"],
                [[k + 1, delta] for k, delta in enumerate(informe.deltas)],
            )
        if "F" in informes and "G" in informes:
            orden = metrica.check_ordering(informes["F"].final, informes["G"].final)
            logger.info(orden.resumen)
            escritor.escribir_json("orden.json", InformeOrdenLeer.desde_dominio(orden))
        if resultados_barrido:
            escritor.escribir_tabla(
                "barrido.csv", CABECERA_BARRIDO, filas_barrido(resultados_barrido, contexto.etiquetas)
            )
    return 0
