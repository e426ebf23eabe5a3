# app/cli/comandos/barrido.py
import argparse
import logging
from fractions import Fraction
from typing import Sequence

from app.cli.comandos.contexto import ContextoEjecucion
from app.cli.opciones import opcion_config
from app.core.deps import get_escritor, get_metrica_servicio
from app.dominio.entidades.informes import InformePuntoFijo
from app.dominio.excepciones.dominio_excepciones import ConfiguracionInvalidaError
from app.esquemas.configuracion import ConfiguracionEjecucion

logger = logging.getLogger(__name__)

CABECERA_BARRIDO = ["functional", "c", "x", "y", "value"]


def registrar(subparsers: argparse._SubParsersAction, comun: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "sweep", parents=[comun], help="punto fijo por pares para una lista de descuentos"
    )
    opcion_config(parser, "--discounts", "discounts", type=float, nargs="+", help="descuentos en (0, 1)")
    parser.set_defaults(comando=cmd_sweep)


def barrer(
    contexto: ContextoEjecucion, descuentos: Sequence[float]
) -> list[tuple[str, float, InformePuntoFijo]]:
    """Punto fijo de cada funcional seleccionado para cada descuento (c creciente)."""
    config = contexto.config
    metrica = get_metrica_servicio()
    resultados = []
    for funcional in config.funcionales:
        for c, informe in metrica.discount_sweep(
            contexto.model,
            descuentos,
            funcional,
            epsilon_time=config.tolerances.epsilon_time,
            time_step=Fraction(config.tolerances.time_step),
            epsilon_fix=config.tolerances.epsilon_fixpoint,
            max_iter=config.tolerances.max_iter,
            path_mode=contexto.modo_g,
        ):
            resultados.append((funcional, c, informe))
    return resultados


def filas_barrido(
    resultados: Sequence[tuple[str, float, InformePuntoFijo]], etiquetas: Sequence[str]
) -> list[list[object]]:
    """Una fila (funcional, c, x, y, valor) por par x < y."""
    filas = []
    for funcional, c, informe in resultados:
        final = informe.final
        for x in range(final.n):
            for y in range(x + 1, final.n):
                filas.append([funcional, c, etiquetas[x], etiquetas[y], final[x, y]])
    return filas


def cmd_sweep(config: ConfiguracionEjecucion, args: argparse.Namespace) -> int:
    """Escribe sweep.csv con el valor de cada par para cada descuento."""
    if not config.discounts:
        raise ConfiguracionInvalidaError("sweep requiere una lista de descuentos (--discounts o 'discounts')")
    contexto = ContextoEjecucion.desde_config(config)
    resultados = barrer(contexto, config.discounts)
    no_convergidos = [(f, c) for f, c, informe in resultados if not informe.converged]
    if no_convergidos:
        logger.warning(f"Sin convergencia para {no_convergidos}")
    with get_escritor(config.out_dir) as escritor:
        escritor.escribir_tabla("sweep.csv", CABECERA_BARRIDO, filas_barrido(resultados, contexto.etiquetas))
    return 0
