"""
Implementación del escritor de artefactos sobre el sistema de archivos.

Cada ejecución adquiere su directorio de salida con un archivo de bloqueo
creado en modo exclusivo; una segunda ejecución sobre el mismo directorio
falla con DirectorioBloqueadoError en lugar de mezclar artefactos.
"""
import csv
import logging
import os
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

from app.core.config import settings
from app.dominio.excepciones.dominio_excepciones import ArtefactoError, DirectorioBloqueadoError
from app.dominio.interfaces.escritor_artefactos import IEscritorArtefactos
from app.dominio.objetos_valor.matriz_pseudometrica import MatrizPseudometrica
from app.infraestructura.excepciones.mapeador_excepciones import ExcepcionesMapper

logger = logging.getLogger(__name__)

NOMBRE_BLOQUEO = ".bloqueo"


def formatear_numero(valor: object, cifras: Optional[int] = None) -> str:
    """Números con `cifras` dígitos significativos; el resto se escribe tal cual."""
    if isinstance(valor, (bool, np.bool_)):
        return str(bool(valor)).lower()
    if isinstance(valor, (float, np.floating)):
        texto = f"{float(valor):.{cifras or settings.CSV_SIGNIFICANT_DIGITS}g}"
        # -0 y 0 deben escribirse igual para que los artefactos sean idénticos.
        return "0" if texto in ("-0", "0") else texto
    if isinstance(valor, (int, np.integer)):
        return str(int(valor))
    return str(valor)


class EscritorArtefactos(IEscritorArtefactos):
    """
    Escribe informes JSON y tablas CSV dentro de un directorio bloqueado.

    Ejemplo de uso:
    ```python
    with EscritorArtefactos("salida") as escritor:
        escritor.escribir_json("punto_fijo_F.json", informe)
        escritor.escribir_matriz("matriz_F.csv", matriz, etiquetas)
    ```
    """

    def __init__(self, directorio: Union[str, Path], cifras: Optional[int] = None):
        """
        Args:
            directorio: Directorio de salida; se crea si no existe.
            cifras: Dígitos significativos de los CSV (settings.CSV_SIGNIFICANT_DIGITS por defecto).
        """
        self.directorio = Path(directorio)
        self.cifras = cifras or settings.CSV_SIGNIFICANT_DIGITS
        self._bloqueo: Optional[Path] = None
        self.escritos: list[Path] = []

    def __enter__(self) -> "EscritorArtefactos":
        """
        Crea el directorio y el archivo de bloqueo.

        Raises:
            DirectorioBloqueadoError: Si otra ejecución ya tiene el directorio.
            ArtefactoError: Si el directorio no se puede crear.
        """
        bloqueo = self.directorio / NOMBRE_BLOQUEO
        try:
            self.directorio.mkdir(parents=True, exist_ok=True)
            descriptor = os.open(bloqueo, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise DirectorioBloqueadoError(str(self.directorio)) from None
        except OSError as e:
            raise ExcepcionesMapper.wrap_exception(e, ArtefactoError) from e
        with os.fdopen(descriptor, "w") as archivo:
            archivo.write(f"{os.getpid()}\n")
        self._bloqueo = bloqueo
        logger.debug(f"Directorio de salida adquirido: {self.directorio}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Libera el bloqueo aunque la ejecución haya fallado."""
        if self._bloqueo is not None:
            try:
                self._bloqueo.unlink(missing_ok=True)
            except OSError as e:
                logger.warning(f"No se pudo liberar el bloqueo {self._bloqueo}: {e}")
            self._bloqueo = None
        if exc_type is None:
            logger.info(f"{len(self.escritos)} artefactos escritos en {self.directorio}")

    def _ruta(self, nombre: str) -> Path:
        if self._bloqueo is None:
            raise ArtefactoError("El escritor debe usarse dentro de un bloque 'with'")
        return self.directorio / nombre

    def _registrar(self, ruta: Path) -> Path:
        self.escritos.append(ruta)
        logger.info(f"Artefacto escrito: {ruta}")
        return ruta

    def escribir_json(self, nombre: str, informe: BaseModel) -> Path:
        ruta = self._ruta(nombre)
        try:
            ruta.write_text(informe.model_dump_json(indent=2) + "\n", encoding="utf-8")
        except OSError as e:
            raise ExcepcionesMapper.wrap_exception(e, ArtefactoError) from e
        return self._registrar(ruta)

    def escribir_matriz(self, nombre: str, matriz: MatrizPseudometrica, etiquetas: Sequence[str]) -> Path:
        """
        Matriz n × n con las etiquetas de estado como cabecera y primera columna.

        Raises:
            ArtefactoError: Si el número de etiquetas no coincide con la matriz.
        """
        if len(etiquetas) != matriz.n:
            raise ArtefactoError(f"{len(etiquetas)} etiquetas para una matriz de {matriz.n} estados")
        filas = [[etiqueta, *fila] for etiqueta, fila in zip(etiquetas, matriz.values)]
        return self.escribir_tabla(nombre, ["", *etiquetas], filas)

    def escribir_tabla(self, nombre: str, cabecera: Sequence[str], filas: Sequence[Sequence[object]]) -> Path:
        ruta = self._ruta(nombre)
        try:
            with ruta.open("w", newline="", encoding="utf-8") as archivo:
                escritor = csv.writer(archivo, lineterminator="\n")
                escritor.writerow(cabecera)
                for fila in filas:
                    escritor.writerow([formatear_numero(v, self.cifras) for v in fila])
        except OSError as e:
            raise ExcepcionesMapper.wrap_exception(e, ArtefactoError) from e
        return self._registrar(ruta)
