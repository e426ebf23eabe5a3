"""
Módulo para el mapeo de excepciones técnicas a excepciones de dominio.

Traduce los errores de las librerías usadas por los adaptadores (pydantic,
json, lark, POT, sistema de archivos) a excepciones de dominio que la capa de
presentación sabe convertir en códigos de salida.
"""
import json
import traceback
from typing import Optional, Type

from lark.exceptions import UnexpectedInput
from pydantic import ValidationError

from app.dominio.excepciones.dominio_excepciones import (
    ArtefactoError,
    ConfiguracionInvalidaError,
    DominioExcepcion,
    SintaxisFormulaError,
)


class ExcepcionesMapper:
    """
    Clase que mapea excepciones técnicas a excepciones de dominio.
    """

    @classmethod
    def map_exception(cls, exception: Exception) -> DominioExcepcion:
        """
        Mapea una excepción técnica a una excepción de dominio.

        Args:
            exception: La excepción técnica a mapear.

        Returns:
            Una excepción de dominio que representa el error.
        """
        if isinstance(exception, DominioExcepcion):
            # Si ya es una excepción de dominio, la devolvemos tal cual
            return exception
        elif isinstance(exception, ValidationError):
            return cls._map_validation_error(exception)
        elif isinstance(exception, json.JSONDecodeError):
            return ConfiguracionInvalidaError(
                f"El documento de configuración no es JSON válido (línea {exception.lineno}, "
                f"columna {exception.colno}): {exception.msg}"
            )
        elif isinstance(exception, UnexpectedInput):
            return SintaxisFormulaError(
                str(getattr(exception, "token", "")),
                posicion=getattr(exception, "column", None),
                linea=getattr(exception, "line", None),
            )
        elif isinstance(exception, FileNotFoundError):
            return ConfiguracionInvalidaError(f"No se encontró el archivo '{exception.filename}'")
        elif isinstance(exception, OSError):
            return ArtefactoError(f"Error de entrada/salida: {exception}")
        else:
            # Para cualquier otra excepción, creamos una excepción de dominio genérica
            return DominioExcepcion(f"Error inesperado: {str(exception)}")

    @classmethod
    def _map_validation_error(cls, exception: ValidationError) -> ConfiguracionInvalidaError:
        """Resume los errores de pydantic como 'ruta: mensaje'."""
        detalles = []
        for error in exception.errors():
            ruta = ".".join(str(parte) for parte in error.get("loc", ())) or "<raíz>"
            detalles.append(f"{ruta}: {error.get('msg')}")
        return ConfiguracionInvalidaError("Configuración inválida: " + "; ".join(detalles))

    @classmethod
    def wrap_exception(
        cls,
        exception: Exception,
        destino: Optional[Type[DominioExcepcion]] = None,
    ) -> DominioExcepcion:
        """
        Mapea una excepción técnica a una excepción de dominio y preserva el traceback.

        Args:
            exception: La excepción técnica a mapear.
            destino: Clase de dominio a usar en lugar del mapeo por tipo.

        Returns:
            Una excepción de dominio con el traceback original como notas.
        """
        if destino is not None:
            domain_exception = destino(f"{exception.__class__.__name__}: {exception}")
        else:
            domain_exception = cls.map_exception(exception)

        tb = traceback.extract_tb(exception.__traceback__)
        tb_str = "".join(traceback.format_list(tb))
        domain_exception.__notes__ = [
            f"Excepción original: {exception.__class__.__name__}: {str(exception)}",
            f"Traceback original:\n{tb_str}",
        ]
        domain_exception.__cause__ = exception
        return domain_exception

