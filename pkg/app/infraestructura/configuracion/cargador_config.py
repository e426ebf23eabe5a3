"""
Lectura del documento de configuración y de artefactos previos.

Los flags de la CLI llegan como un diccionario de sobrescrituras con rutas
con puntos ("tolerances.epsilon_time") que se fusionan con el documento antes
de validarlo con pydantic; así una misma regla valida ambas fuentes.
"""
import json
import logging
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from pydantic import ValidationError

from app.dominio.excepciones.dominio_excepciones import ArtefactoError, ConfiguracionInvalidaError
from app.dominio.objetos_valor.matriz_pseudometrica import MatrizPseudometrica
from app.esquemas.configuracion import ConfiguracionEjecucion
from app.esquemas.informes import InformePuntoFijoLeer
from app.infraestructura.excepciones.mapeador_excepciones import ExcepcionesMapper

logger = logging.getLogger(__name__)

Ruta = Union[str, Path]


def fusionar_sobrescrituras(documento: dict[str, Any], sobrescrituras: Mapping[str, Any]) -> dict[str, Any]:
    """
    Aplica las sobrescrituras no nulas sobre una copia del documento.

    Args:
        documento: Documento de configuración ya decodificado.
        sobrescrituras: Claves con puntos para los bloques anidados.

    Returns:
        Un documento nuevo; el original no se modifica.
    """
    resultado = json.loads(json.dumps(documento))
    for clave, valor in sobrescrituras.items():
        if valor is None:
            continue
        *bloques, campo = clave.split(".")
        destino = resultado
        for bloque in bloques:
            actual = destino.get(bloque)
            if actual is None:
                actual = destino[bloque] = {}
            elif not isinstance(actual, dict):
                raise ConfiguracionInvalidaError(f"'{bloque}' debe ser un objeto para aplicar '{clave}'")
            destino = actual
        destino[campo] = valor
    return resultado


class CargadorConfiguracion:
    """Adaptador de entrada: archivos JSON → modelos validados."""

    def leer_documento(self, ruta: Ruta) -> dict[str, Any]:
        """
        Raises:
            ConfiguracionInvalidaError: Si el archivo no existe o no es un objeto JSON.
        """
        try:
            documento = json.loads(Path(ruta).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ExcepcionesMapper.wrap_exception(e) from e
        if not isinstance(documento, dict):
            raise ConfiguracionInvalidaError(f"'{ruta}' debe contener un objeto JSON")
        return documento

    def cargar(
        self, ruta: Optional[Ruta] = None, sobrescrituras: Optional[Mapping[str, Any]] = None
    ) -> ConfiguracionEjecucion:
        """
        Construye la configuración de la ejecución.

        Args:
            ruta: Documento JSON; sin él, todo debe venir de las sobrescrituras.
            sobrescrituras: Valores de los flags de la CLI.

        Raises:
            ConfiguracionInvalidaError: Con el resumen 'campo: mensaje' de pydantic.
        """
        documento = self.leer_documento(ruta) if ruta is not None else {}
        documento = fusionar_sobrescrituras(documento, sobrescrituras or {})
        try:
            config = ConfiguracionEjecucion.model_validate(documento)
        except ValidationError as e:
            raise ExcepcionesMapper.wrap_exception(e) from e
        logger.info(
            f"Configuración cargada: proceso {config.process.kind}, c = {config.discount}, "
            f"funcional {config.functional}, trayectorias {config.path_mode}"
        )
        return config

    def cargar_punto_fijo(self, ruta: Ruta) -> tuple[InformePuntoFijoLeer, MatrizPseudometrica]:
        """
        Lee un informe de punto fijo escrito por `metric`.

        Raises:
            ArtefactoError: Si el archivo no es un informe de punto fijo válido.
        """
        try:
            informe = InformePuntoFijoLeer.model_validate_json(Path(ruta).read_text(encoding="utf-8"))
        except (OSError, ValidationError) as e:
            raise ExcepcionesMapper.wrap_exception(e, ArtefactoError) from e
        return informe, MatrizPseudometrica(informe.matriz_final)
