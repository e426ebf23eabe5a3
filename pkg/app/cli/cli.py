# app/cli/cli.py
"""
Superficie de operador: subcomandos `metric`, `logic`, `validate` y `sweep`.

Cada subcomando recibe la configuración ya validada (documento JSON más
flags) y devuelve su código de salida; las excepciones se traducen en
`middlewares/manejador_excepciones.py`.
"""
import argparse
import logging
from typing import Optional, Sequence

from app.cli.comandos import barrido, logica, metrica, validacion
from app.cli.middlewares.manejador_excepciones import manejar_excepciones
from app.cli.opciones import ParserArgumentos, parser_comun, sobrescrituras
from app.core.deps import get_cargador
from app.core.registro import configurar_registro

logger = logging.getLogger(__name__)


def construir_parser() -> argparse.ArgumentParser:
    parser = ParserArgumentos(
        prog="metricas-difusiones",
        description="Pseudométricas de comportamiento para cadenas finitas y difusiones discretizadas.",
    )
    subparsers = parser.add_subparsers(dest="subcomando", metavar="{metric,logic,validate,sweep}")
    subparsers.required = True
    comun = parser_comun()
    # Registramos los subcomandos
    metrica.registrar(subparsers, comun)
    logica.registrar(subparsers, comun)
    validacion.registrar(subparsers, comun)
    barrido.registrar(subparsers, comun)
    return parser


def ejecutar(argv: Optional[Sequence[str]] = None) -> int:
    """Punto de entrada de la CLI; devuelve el código de salida."""

    def _ejecutar() -> int:
        args = construir_parser().parse_args(argv)
        configurar_registro(args.log_level)
        config = get_cargador().cargar(args.config, sobrescrituras(args))
        logger.info(f"Subcomando {args.subcomando}, salida en {config.out_dir}")
        return args.comando(config, args)

    return manejar_excepciones(_ejecutar)
