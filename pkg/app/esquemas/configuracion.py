# app/esquemas/configuracion.py
from fractions import Fraction
from typing import Annotated, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings
from app.dominio.objetos_valor.modo_trayectorias import ModoTrayectorias


def _validar_racional(valor: str) -> str:
    """Los tiempos se escriben como racionales ('1/2', '0.25', '3')."""
    try:
        racional = Fraction(str(valor))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"'{valor}' no es un racional válido") from None
    if racional <= 0:
        raise ValueError(f"'{valor}' debe ser estrictamente positivo")
    return str(racional)


TextoRacional = Annotated[str, BeforeValidator(_validar_racional)]


class RejillaEsquema(BaseModel):
    """Rejilla espacial uniforme {min, min + step, …, max}."""
    model_config = ConfigDict(extra="forbid")

    min: float
    max: float
    step: float = Field(..., gt=0)

    @model_validator(mode="after")
    def validar_extremos(self):
        if self.max < self.min:
            raise ValueError("max debe ser mayor o igual que min")
        return self


class ObservableEsquema(BaseModel):
    """Valores explícitos o una fórmula con nombre."""
    model_config = ConfigDict(extra="forbid")

    values: Optional[list[float]] = None
    formula: Optional[Literal["clamp-linear", "indicator-interval"]] = None
    interval: Optional[tuple[float, float]] = None

    @model_validator(mode="after")
    def validar_definicion(self):
        if (self.values is None) == (self.formula is None):
            raise ValueError("el observable necesita exactamente uno de 'values' o 'formula'")
        if self.formula == "indicator-interval" and self.interval is None:
            raise ValueError("indicator-interval requiere 'interval': [a, b]")
        if self.values is not None and any(not 0 <= v <= 1 for v in self.values):
            raise ValueError("los valores del observable deben estar en [0, 1]")
        return self


class ProcesoEsquema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["finite-chain", "brownian", "ornstein-uhlenbeck"]
    observable: ObservableEsquema
    grid: Optional[RejillaEsquema] = None
    truncation_radius: float = Field(5.0, gt=0)
    matrix: Optional[list[list[float]]] = None
    chain_step: TextoRacional = "1"
    labels: Optional[list[str]] = None
    theta: Optional[float] = Field(None, gt=0)
    sigma: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def validar_tipo(self):
        if self.kind == "finite-chain":
            if not self.matrix:
                raise ValueError("una cadena finita requiere 'matrix'")
            n = len(self.matrix)
            if any(len(fila) != n for fila in self.matrix):
                raise ValueError("'matrix' debe ser cuadrada")
            if self.labels is not None and len(self.labels) != n:
                raise ValueError("debe haber una etiqueta por estado")
        elif self.grid is None:
            raise ValueError(f"el proceso '{self.kind}' requiere 'grid'")
        if self.kind == "ornstein-uhlenbeck" and (self.theta is None or self.sigma is None):
            raise ValueError("ornstein-uhlenbeck requiere 'theta' y 'sigma'")
        return self


class ToleranciasEsquema(BaseModel):
    """Presupuesto de error ε_time + ε_grid + ε_fix y límite de iteraciones."""
    model_config = ConfigDict(extra="forbid")

    epsilon_time: float = Field(settings.EPSILON_TIME, gt=0)
    time_step: TextoRacional = "1"
    epsilon_grid: float = Field(settings.EPSILON_GRID, gt=0)
    epsilon_fixpoint: float = Field(settings.EPSILON_FIXPOINT, gt=0)
    max_iter: int = Field(settings.MAX_ITER, ge=1)


class PresupuestoLogicoEsquema(BaseModel):
    """Presupuesto de la búsqueda de fórmulas."""
    model_config = ConfigDict(extra="forbid")

    logic: Literal["lambda", "sigma"] = "lambda"
    max_depth: int = Field(3, ge=1)
    max_formulas: int = Field(20000, ge=1)
    rational_denominator_cap: int = Field(8, ge=1)
    seed: int = 0
    deepening_rounds: int = Field(0, ge=0)
    deepening_depth: int = Field(2, ge=0)
    path_samples: int = Field(1000, ge=1)


class ConfiguracionEjecucion(BaseModel):
    """
    Documento de configuración de una ejecución (RunConfig).

    Los flags de la CLI sobrescriben sus campos antes de validar.
    """
    model_config = ConfigDict(extra="forbid")

    process: ProcesoEsquema
    discount: float = Field(..., gt=0, lt=1)
    tolerances: ToleranciasEsquema = Field(default_factory=ToleranciasEsquema)
    functional: Literal["F", "G", "both"] = "F"
    path_mode: str = "exact"
    logic: PresupuestoLogicoEsquema = Field(default_factory=PresupuestoLogicoEsquema)
    out_dir: str = "salida"
    seed: Optional[int] = None
    discounts: Optional[list[float]] = None
    step_sensitivity: bool = False

    @field_validator("path_mode")
    @classmethod
    def validar_modo(cls, valor: str) -> str:
        if valor == "exact":
            return valor
        prefijo, _, cantidad = valor.partition(":")
        if prefijo != "mc" or not cantidad.isdigit() or int(cantidad) < 1:
            raise ValueError("path_mode debe ser 'exact' o 'mc:<n>' con n ≥ 1")
        return valor

    @field_validator("discounts")
    @classmethod
    def validar_descuentos(cls, valores: Optional[list[float]]) -> Optional[list[float]]:
        if valores is not None and any(not 0 < c < 1 for c in valores):
            raise ValueError("todos los descuentos deben estar en (0, 1)")
        return valores

    @model_validator(mode="after")
    def validar_semilla(self):
        usa_g = self.functional in ("G", "both")
        if usa_g and self.path_mode.startswith("mc") and self.seed is None:
            raise ValueError("el modo Monte Carlo requiere 'seed'")
        return self

    @property
    def modo_trayectorias(self) -> ModoTrayectorias:
        return ModoTrayectorias.desde_texto(self.path_mode, self.seed)

    @property
    def funcionales(self) -> tuple[str, ...]:
        return ("F", "G") if self.functional == "both" else (self.functional,)
