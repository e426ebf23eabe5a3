# app/dominio/excepciones/dominio_excepciones.py
from typing import Optional


class DominioExcepcion(Exception):
    """Clase base para excepciones específicas del dominio."""
    pass


# Excepciones relacionadas con la configuración y los datos de entrada
class ConfiguracionInvalidaError(DominioExcepcion):
    """Se lanza cuando el documento de configuración o un flag no es válido."""
    def __init__(self, mensaje: str = "La configuración proporcionada no es válida"):
        self.mensaje = mensaje
        super().__init__(mensaje)


class TiempoInvalidoError(ConfiguracionInvalidaError):
    """Se lanza cuando un tiempo no es estrictamente positivo donde se requiere."""
    def __init__(self, tiempo: object):
        self.tiempo = tiempo
        super().__init__(f"El tiempo '{tiempo}' no es válido: debe ser estrictamente positivo")


class RejillaInvalidaError(ConfiguracionInvalidaError):
    """Se lanza cuando una rejilla espacial o temporal no cumple sus invariantes."""
    def __init__(self, motivo: str):
        self.motivo = motivo
        super().__init__(f"Rejilla inválida: {motivo}")


class DescuentoInvalidoError(ConfiguracionInvalidaError):
    """Se lanza cuando el factor de descuento no está en el intervalo abierto (0, 1)."""
    def __init__(self, descuento: object):
        self.descuento = descuento
        super().__init__(f"El factor de descuento '{descuento}' debe estar en (0, 1)")


class PasoInvalidoError(ConfiguracionInvalidaError):
    """Se lanza cuando el paso temporal no es positivo."""
    def __init__(self, paso: object):
        self.paso = paso
        super().__init__(f"El paso temporal '{paso}' debe ser estrictamente positivo")


class DistribucionInvalidaError(DominioExcepcion):
    """Se lanza cuando los pesos de una distribución no son no negativos o no suman 1."""
    def __init__(self, motivo: str):
        self.motivo = motivo
        super().__init__(f"Distribución inválida: {motivo}")


class SecuenciaInvalidaError(DominioExcepcion):
    """Se lanza cuando una sucesión de costes no es creciente o no está acotada por el límite."""
    def __init__(self, indice: int, motivo: str):
        self.indice = indice
        self.motivo = motivo
        super().__init__(f"Sucesión de costes inválida en la posición {indice}: {motivo}")


class EnumeracionDemasiadoGrandeError(DominioExcepcion):
    """Se lanza cuando la enumeración exacta de trayectorias supera el tope configurado."""
    def __init__(self, tamano: int, tope: int):
        self.tamano = tamano
        self.tope = tope
        super().__init__(
            f"La enumeración requiere {tamano} trayectorias y el tope es {tope}; "
            "use el modo Monte Carlo"
        )


class TiempoNoSoportadoError(DominioExcepcion):
    """Se lanza cuando un tiempo no puede evaluarse sobre los núcleos o la rejilla del modelo."""
    def __init__(self, tiempo: object, motivo: str = ""):
        self.tiempo = tiempo
        mensaje = f"El tiempo '{tiempo}' no está soportado"
        if motivo:
            mensaje += f": {motivo}"
        super().__init__(mensaje)


# Excepciones de la lógica
class FormulaError(DominioExcepcion):
    """Clase base para errores al construir o leer fórmulas."""
    pass


class SintaxisFormulaError(FormulaError):
    """Se lanza cuando el texto de una fórmula no respeta la sintaxis concreta."""
    def __init__(self, texto: str, posicion: Optional[int] = None, linea: Optional[int] = None, detalle: str = ""):
        self.texto = texto
        self.posicion = posicion
        self.linea = linea
        self.detalle = detalle
        mensaje = f"Error de sintaxis en '{texto}'"
        if linea is not None:
            mensaje += f" (línea {linea})"
        if posicion is not None:
            mensaje += f" en la posición {posicion}"
        if detalle:
            mensaje += f": {detalle}"
        super().__init__(mensaje)


class GramaticaMezcladaError(FormulaError):
    """Se lanza cuando una fórmula combina nodos exclusivos de Λ y de L_σ."""
    def __init__(self, detalle: str = "una fórmula no puede usar '<t>' e 'int' a la vez"):
        super().__init__(f"Gramática mezclada: {detalle}")


class ConstanteFueraDeRangoError(FormulaError):
    """Se lanza cuando una constante racional no pertenece a [0, 1] o un tiempo es negativo."""
    def __init__(self, valor: object, rango: str = "[0, 1]"):
        self.valor = valor
        super().__init__(f"El valor '{valor}' está fuera del rango {rango}")


class PrecondicionFallidaError(DominioExcepcion):
    """Se lanza cuando no se cumple la premisa de una construcción (por ejemplo, el gadget)."""
    def __init__(self, motivo: str):
        self.motivo = motivo
        super().__init__(f"Precondición no satisfecha: {motivo}")


# Violaciones de invariantes (código de salida 2 en la CLI)
class ViolacionInvarianteError(DominioExcepcion):
    """Clase base para violaciones de invariantes matemáticos."""
    def __init__(self, mensaje: str, violaciones: Optional[list[str]] = None):
        self.violaciones = violaciones or [mensaje]
        super().__init__(mensaje)


class HonestidadError(ViolacionInvarianteError):
    """Se lanza cuando un núcleo o una matriz de transición pierde o gana masa."""
    def __init__(self, origen: str, masa: float):
        self.origen = origen
        self.masa = masa
        super().__init__(f"Violación de honestidad en {origen}: la masa total es {masa!r} y debe ser 1")


class PseudometricaInvalidaError(ViolacionInvarianteError):
    """Se lanza cuando una matriz no es una pseudométrica acotada por 1."""
    def __init__(self, motivo: str):
        self.motivo = motivo
        super().__init__(f"La matriz no es una pseudométrica válida: {motivo}")


# Excepciones de infraestructura traducidas al dominio
class TransporteError(DominioExcepcion):
    """Se lanza cuando el resolvedor de transporte no alcanza el óptimo."""
    def __init__(self, mensaje: str = "El resolvedor de transporte óptimo falló"):
        self.mensaje = mensaje
        super().__init__(mensaje)


class ArtefactoError(DominioExcepcion):
    """Clase base para errores al leer o escribir artefactos."""
    pass


class DirectorioBloqueadoError(ArtefactoError):
    """Se lanza cuando otra ejecución mantiene el bloqueo del directorio de salida."""
    def __init__(self, directorio: str):
        self.directorio = directorio
        super().__init__(f"El directorio de salida '{directorio}' está bloqueado por otra ejecución")
