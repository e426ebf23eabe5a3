# app/cli/opciones.py
"""
Flags compartidos y su correspondencia con los campos de la configuración.

Un flag de configuración guarda su valor bajo la clave con puntos del
documento ("tolerances.epsilon_time"); si no se pasa, queda a None y no
sobrescribe nada.
"""
import argparse
from typing import Any

from app.dominio.excepciones.dominio_excepciones import ConfiguracionInvalidaError

_CLAVES_CONFIG: set[str] = set()


class ParserArgumentos(argparse.ArgumentParser):
    """Los errores de uso se convierten en ConfiguracionInvalidaError (código 1)."""

    def error(self, message: str):
        raise ConfiguracionInvalidaError(f"{self.prog}: {message}")


def opcion_config(parser: argparse.ArgumentParser, flag: str, clave: str, **kwargs) -> None:
    """Añade un flag que sobrescribe el campo `clave` del documento."""
    _CLAVES_CONFIG.add(clave)
    kwargs.setdefault("default", None)
    parser.add_argument(flag, dest=clave, **kwargs)


def interruptor_config(parser: argparse.ArgumentParser, flag: str, clave: str, help: str) -> None:
    """Flag booleano que solo sobrescribe cuando aparece."""
    opcion_config(parser, flag, clave, action="store_const", const=True, help=help)


def sobrescrituras(args: argparse.Namespace) -> dict[str, Any]:
    """Valores de los flags de configuración presentes en la línea de comandos."""
    return {
        clave: valor
        for clave, valor in vars(args).items()
        if clave in _CLAVES_CONFIG and valor is not None
    }


def parser_comun() -> argparse.ArgumentParser:
    """Flags comunes a todos los subcomandos (espejo de RunConfig)."""
    comun = ParserArgumentos(add_help=False)
    comun.add_argument("--config", help="documento de configuración JSON")
    comun.add_argument("--log-level", default=None, help="nivel de registro (por defecto LOG_LEVEL)")
    opcion_config(comun, "--seed", "seed", type=int, help="semilla de todas las etapas Monte Carlo")
    opcion_config(comun, "--out-dir", "out_dir", help="directorio de artefactos")
    opcion_config(comun, "--functional", "functional", choices=["F", "G", "both"])
    opcion_config(comun, "--path-mode", "path_mode", help="exact o mc:<n>")
    opcion_config(comun, "--discount", "discount", type=float, help="factor de descuento c en (0, 1)")
    opcion_config(comun, "--epsilon-time", "tolerances.epsilon_time", type=float)
    opcion_config(comun, "--time-step", "tolerances.time_step", help="paso temporal racional, p. ej. 1/2")
    opcion_config(comun, "--epsilon-fixpoint", "tolerances.epsilon_fixpoint", type=float)
    opcion_config(comun, "--max-iter", "tolerances.max_iter", type=int)
    return comun
