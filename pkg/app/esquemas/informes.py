# app/esquemas/informes.py
"""
Esquemas de salida: cada informe JSON de una ejecución es un modelo pydantic.

No incluyen marcas de tiempo; la misma configuración y semilla producen
exactamente el mismo JSON.
"""
from typing import Any, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from app.dominio.entidades.informes import (
    Chequeo,
    EstimacionLogica,
    InformeOrden,
    InformePuntoFijo,
    Testigo,
)
from app.dominio.logica.formulas import format_formula
from app.dominio.objetos_valor.matriz_pseudometrica import MatrizPseudometrica


def _filas(matriz: MatrizPseudometrica) -> list[list[float]]:
    return [[float(v) for v in fila] for fila in matriz.values]


class InformePuntoFijoLeer(BaseModel):
    """FixpointReport serializado: eco de configuración, Δ por iteración y matriz final."""
    funcional: str
    converged: bool
    iteraciones: int
    residual: float
    deltas: list[float]
    ruido_muestreo: float = 0.0
    sensibilidad_paso: Optional[float] = None
    configuracion: dict[str, Any]
    etiquetas: list[str]
    matriz_final: list[list[float]]

    @classmethod
    def desde_dominio(cls, informe: InformePuntoFijo, etiquetas: Sequence[str]) -> "InformePuntoFijoLeer":
        return cls(
            funcional=informe.funcional,
            converged=informe.converged,
            iteraciones=informe.iteraciones,
            residual=informe.residual,
            deltas=list(informe.deltas),
            ruido_muestreo=informe.ruido_muestreo,
            sensibilidad_paso=informe.sensibilidad_paso,
            configuracion=informe.configuracion,
            etiquetas=list(etiquetas),
            matriz_final=_filas(informe.final),
        )


class InformeOrdenLeer(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    resumen: str
    pasa: bool
    violacion_maxima: float
    ubicacion: Optional[tuple[int, int]] = None
    tolerancia: float

    @classmethod
    def desde_dominio(cls, informe: InformeOrden) -> "InformeOrdenLeer":
        return cls.model_validate(informe)


class FormulaTestigoLeer(BaseModel):
    """{pair, value, formula-text}"""
    pair: tuple[int, int]
    value: float
    formula: str

    @classmethod
    def desde_dominio(cls, testigo: Testigo) -> "FormulaTestigoLeer":
        return cls(pair=testigo.par, value=testigo.valor, formula=format_formula(testigo.formula))


class BrechaPar(BaseModel):
    pair: tuple[int, int]
    fixpoint: float
    estimate: float
    gap: float


class ResumenBrecha(BaseModel):
    """Distancia entre la estimación lógica y un punto fijo ya calculado."""
    funcional: str
    brecha_maxima: float
    excede_punto_fijo: float = Field(0.0, description="max(estimación − punto fijo), debe ser ≤ tolerancia")
    pares: list[BrechaPar]

    @classmethod
    def calcular(
        cls, funcional: str, punto_fijo: MatrizPseudometrica, estimacion: MatrizPseudometrica
    ) -> "ResumenBrecha":
        pares = [
            BrechaPar(
                pair=(x, y),
                fixpoint=punto_fijo[x, y],
                estimate=estimacion[x, y],
                gap=punto_fijo[x, y] - estimacion[x, y],
            )
            for x in range(punto_fijo.n)
            for y in range(x + 1, punto_fijo.n)
        ]
        return cls(
            funcional=funcional,
            brecha_maxima=max((p.gap for p in pares), default=0.0),
            excede_punto_fijo=max(0.0, max((-p.gap for p in pares), default=0.0)),
            pares=pares,
        )


class EstimacionLogicaLeer(BaseModel):
    logica: str
    exacta: bool
    formulas_evaluadas: int
    testigos: list[FormulaTestigoLeer]
    brecha: Optional[ResumenBrecha] = None

    @classmethod
    def desde_dominio(
        cls, estimacion: EstimacionLogica, brecha: Optional[ResumenBrecha] = None
    ) -> "EstimacionLogicaLeer":
        return cls(
            logica=estimacion.logica,
            exacta=estimacion.exacta,
            formulas_evaluadas=len(estimacion.formulas),
            testigos=[FormulaTestigoLeer.desde_dominio(t) for t in estimacion.testigos],
            brecha=brecha,
        )


class ChequeoLeer(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    nombre: str
    pasa: bool
    valor: float
    detalle: str


class InformeValidacionLeer(BaseModel):
    """Resultado legible por máquina de `validate`."""
    pasa: bool
    chequeos: list[ChequeoLeer]
    violaciones: list[str]

    @classmethod
    def desde_chequeos(cls, chequeos: Sequence[Chequeo]) -> "InformeValidacionLeer":
        return cls(
            pasa=all(c.pasa for c in chequeos),
            chequeos=[ChequeoLeer.model_validate(c) for c in chequeos],
            violaciones=[f"{c.nombre}: {c.detalle}" for c in chequeos if not c.pasa],
        )

