# app/cli/comandos/logica.py
import argparse
import logging
from pathlib import Path

from app.cli.comandos.contexto import ContextoEjecucion
from app.cli.opciones import opcion_config
from app.core.deps import get_cargador, get_escritor, get_logica_servicio, get_parser
from app.dominio.excepciones.dominio_excepciones import ConfiguracionInvalidaError
from app.dominio.logica.formulas import format_formula
from app.dominio.objetos_valor.modo_trayectorias import ModoTrayectorias
from app.esquemas.configuracion import ConfiguracionEjecucion
from app.esquemas.informes import EstimacionLogicaLeer, ResumenBrecha

logger = logging.getLogger(__name__)


def registrar(subparsers: argparse._SubParsersAction, comun: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "logic", parents=[comun], help="evalúa fórmulas y estima λ̂ / ℓ̂ por búsqueda"
    )
    parser.add_argument("--formulas", help="archivo con una fórmula de estado por línea")
    parser.add_argument("--fixpoint", help="informe punto_fijo_*.json para el resumen de brecha")
    parser.add_argument("--no-search", action="store_true", help="solo evalúa el archivo de fórmulas")
    opcion_config(parser, "--logic", "logic.logic", choices=["lambda", "sigma"])
    opcion_config(parser, "--max-depth", "logic.max_depth", type=int)
    opcion_config(parser, "--max-formulas", "logic.max_formulas", type=int)
    opcion_config(parser, "--deepening-rounds", "logic.deepening_rounds", type=int)
    opcion_config(parser, "--path-samples", "logic.path_samples", type=int)
    parser.set_defaults(comando=cmd_logic)


def modo_logica(config: ConfiguracionEjecucion) -> ModoTrayectorias:
    """
    Monte Carlo solo si se pidió explícitamente; si no, enumeración exacta
    cuando cabe en el tope y muestreo con la semilla del presupuesto si no.
    """
    if config.path_mode == "exact":
        return ModoTrayectorias.desde_texto(f"auto:{config.logic.path_samples}", config.logic.seed)
    semilla = config.seed if config.seed is not None else config.logic.seed
    return ModoTrayectorias.desde_texto(config.path_mode, semilla)


def cmd_logic(config: ConfiguracionEjecucion, args: argparse.Namespace) -> int:
    if args.no_search and not args.formulas:
        raise ConfiguracionInvalidaError("--no-search requiere --formulas")
    contexto = ContextoEjecucion.desde_config(config)
    logica = get_logica_servicio()
    presupuesto = config.logic
    modo = modo_logica(config)

    formulas = []
    if args.formulas:
        ruta = Path(args.formulas)
        try:
            contenido = ruta.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfiguracionInvalidaError(f"No se pudo leer '{ruta}': {e}") from e
        formulas = [f for _, f in get_parser().parse_lineas(contenido)]
        logger.info(f"{len(formulas)} fórmulas leídas de {ruta}")

    estimacion = None
    brecha = None
    if not args.no_search:
        estimacion = logica.estimate_logic_metric(
            presupuesto.logic, contexto.model, config.discount, contexto.tg, presupuesto, modo
        )
        if args.fixpoint:
            informe, punto_fijo = get_cargador().cargar_punto_fijo(args.fixpoint)
            if punto_fijo.n != contexto.model.n:
                raise ConfiguracionInvalidaError(
                    f"El punto fijo tiene {punto_fijo.n} estados y el modelo {contexto.model.n}"
                )
            brecha = ResumenBrecha.calcular(informe.funcional, punto_fijo, estimacion.matriz)
            logger.info(f"Brecha máxima con {informe.funcional}: {brecha.brecha_maxima:.3e}")

    with get_escritor(config.out_dir) as escritor:
        if formulas:
            tabla = logica.evaluation_table(formulas, contexto.model, config.discount, contexto.tg, modo)
            escritor.escribir_tabla(
                "evaluacion.csv",
                ["formula", *contexto.etiquetas],
                [[format_formula(f), *fila] for f, fila in zip(formulas, tabla)],
            )
        if estimacion is not None:
            escritor.escribir_matriz(f"estimacion_{estimacion.logica}.csv", estimacion.matriz, contexto.etiquetas)
            escritor.escribir_json(
                f"testigos_{estimacion.logica}.json", EstimacionLogicaLeer.desde_dominio(estimacion, brecha)
            )
    return 0
