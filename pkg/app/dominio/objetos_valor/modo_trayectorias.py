# app/dominio/objetos_valor/modo_trayectorias.py
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from app.dominio.excepciones.dominio_excepciones import ConfiguracionInvalidaError


class TipoModoTrayectorias(str, Enum):
    EXACTO = "exact"
    MONTE_CARLO = "monte-carlo"
    # Enumeración exacta cuando el modelo lo permite y Monte Carlo en otro caso.
    AUTOMATICO = "auto"


@dataclass(frozen=True, slots=True)
class ModoTrayectorias:
    """Cómo se obtienen las distribuciones de trayectorias ℙ^x."""
    tipo: TipoModoTrayectorias = TipoModoTrayectorias.EXACTO
    muestras: int = 1000
    semilla: Optional[int] = None

    def __post_init__(self):
        if self.muestras < 1:
            raise ConfiguracionInvalidaError(f"El número de muestras debe ser ≥ 1 y es {self.muestras}")
        if self.tipo != TipoModoTrayectorias.EXACTO and self.semilla is None:
            raise ConfiguracionInvalidaError("El modo Monte Carlo requiere una semilla")

    @classmethod
    def exacto(cls) -> "ModoTrayectorias":
        return cls()

    @classmethod
    def monte_carlo(cls, muestras: int, semilla: int) -> "ModoTrayectorias":
        return cls(TipoModoTrayectorias.MONTE_CARLO, muestras, semilla)

    @classmethod
    def desde_texto(cls, texto: str, semilla: Optional[int] = None) -> "ModoTrayectorias":
        """Lee `exact`, `auto:<n>` o `mc:<n>`."""
        if texto == "exact":
            return cls.exacto()
        prefijo, _, cantidad = texto.partition(":")
        tipos = {"mc": TipoModoTrayectorias.MONTE_CARLO, "auto": TipoModoTrayectorias.AUTOMATICO}
        if prefijo not in tipos or not cantidad.isdigit():
            raise ConfiguracionInvalidaError(f"Modo de trayectorias desconocido: '{texto}' (use exact o mc:<n>)")
        return cls(tipos[prefijo], int(cantidad), semilla)

    @property
    def es_monte_carlo(self) -> bool:
        return self.tipo == TipoModoTrayectorias.MONTE_CARLO

    def con_semilla(self, semilla: int) -> "ModoTrayectorias":
        return ModoTrayectorias(self.tipo, self.muestras, semilla)

    def __str__(self) -> str:
        if self.tipo == TipoModoTrayectorias.EXACTO:
            return "exact"
        prefijo = "mc" if self.es_monte_carlo else "auto"
        return f"{prefijo}:{self.muestras}"
