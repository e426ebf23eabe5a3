# app/dominio/interfaces/escritor_artefactos.py
"""
Interfaz para la escritura de artefactos de una ejecución.

Sigue la idea de una unidad de trabajo: el escritor se usa como gestor de
contexto, que adquiere el directorio de salida al entrar y lo libera al salir.
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Sequence

from pydantic import BaseModel

from app.dominio.objetos_valor.matriz_pseudometrica import MatrizPseudometrica


class IEscritorArtefactos(ABC):
    """
    Contrato de los escritores de artefactos (JSON y CSV).

    Atributos:
        directorio: Directorio de salida de la ejecución.
    """
    directorio: Path

    @abstractmethod
    def __enter__(self) -> "IEscritorArtefactos":
        """Adquiere el directorio de salida."""
        pass

    @abstractmethod
    def __exit__(self, exc_type, exc_val, exc_tb):
        """Libera el directorio de salida."""
        pass

    @abstractmethod
    def escribir_json(self, nombre: str, informe: BaseModel) -> Path:
        """Serializa un informe pydantic como JSON."""
        pass

    @abstractmethod
    def escribir_matriz(self, nombre: str, matriz: MatrizPseudometrica, etiquetas: Sequence[str]) -> Path:
        """Escribe una matriz con etiquetas de estado en filas y columnas."""
        pass

    @abstractmethod
    def escribir_tabla(self, nombre: str, cabecera: Sequence[str], filas: Sequence[Sequence[object]]) -> Path:
        """Escribe una tabla CSV genérica (datos para gráficos, evaluaciones)."""
        pass
