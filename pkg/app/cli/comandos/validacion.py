# app/cli/comandos/validacion.py
import argparse
import logging

from app.cli.middlewares.manejador_excepciones import SALIDA_INVARIANTE, SALIDA_OK
from app.core.deps import get_escritor, get_validacion_servicio
from app.esquemas.configuracion import ConfiguracionEjecucion
from app.esquemas.informes import InformeValidacionLeer

logger = logging.getLogger(__name__)


def registrar(subparsers: argparse._SubParsersAction, comun: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "validate", parents=[comun], help="ejecuta la batería de invariantes sobre la instancia"
    )
    parser.set_defaults(comando=cmd_validate)


def cmd_validate(config: ConfiguracionEjecucion, args: argparse.Namespace) -> int:
    """
    Escribe validacion.json; cualquier chequeo fallido da el código 2 y se
    lista en stderr.
    """
    chequeos = get_validacion_servicio().validate(config)
    informe = InformeValidacionLeer.desde_chequeos(chequeos)
    with get_escritor(config.out_dir) as escritor:
        escritor.escribir_json("validacion.json", informe)
    if informe.pasa:
        print(f"validate: {len(chequeos)} chequeos superados")
        return SALIDA_OK
    for violacion in informe.violaciones:
        print(f"violación: {violacion}")
    logger.warning(f"validate: {len(informe.violaciones)} invariantes violados")
    return SALIDA_INVARIANTE
