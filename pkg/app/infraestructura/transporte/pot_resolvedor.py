# app/infraestructura/transporte/pot_resolvedor.py
import logging
import warnings

import numpy as np
import ot

from app.dominio.excepciones.dominio_excepciones import TransporteError
from app.dominio.interfaces.resolvedor_transporte import IResolvedorTransporte, SolucionTransporte
from app.infraestructura.excepciones.mapeador_excepciones import ExcepcionesMapper

logger = logging.getLogger(__name__)


# --- Concrete Implementation ---
class ResolvedorPOT(IResolvedorTransporte):
    """
    Implementación del puerto de transporte con el símplex de red exacto de POT (`ot.emd`).

    No usa regularización entrópica: el plan y los potenciales son óptimos
    exactos y deterministas para una misma entrada.
    """
    def __init__(self, max_iteraciones: int = 100000):
        self.max_iteraciones = max_iteraciones

    def resolver(self, a: np.ndarray, b: np.ndarray, costes: np.ndarray) -> SolucionTransporte:
        """Resuelve min ⟨γ, M⟩ sobre los acoplamientos de (a, b)."""
        a = np.ascontiguousarray(a, dtype=np.float64)
        b = np.ascontiguousarray(b, dtype=np.float64)
        costes = np.ascontiguousarray(costes, dtype=np.float64)
        # El símplex exige masas idénticas; las entradas ya suman 1 salvo redondeo.
        a = a / a.sum()
        b = b / b.sum()

        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                plan, registro = ot.emd(a, b, costes, numItermax=self.max_iteraciones, log=True)
        except Exception as e:
            raise ExcepcionesMapper.wrap_exception(e, TransporteError) from e

        if registro.get("warning") is not None:
            logger.error(f"El símplex de red no alcanzó el óptimo: {registro['warning']}")
            raise TransporteError(f"El símplex de red no alcanzó el óptimo: {registro['warning']}")

        return SolucionTransporte(plan=np.asarray(plan), potencial_destino=np.asarray(registro["v"]))


# Esta aserción funciona gracias a @runtime_checkable.
assert isinstance(ResolvedorPOT(), IResolvedorTransporte)
