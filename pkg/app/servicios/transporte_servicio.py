# app/servicios/transporte_servicio.py
import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from app.core.config import settings
from app.dominio.entidades.informes import InformeDualidad, InformeLimiteWasserstein
from app.dominio.excepciones.dominio_excepciones import DistribucionInvalidaError, SecuenciaInvalidaError
from app.dominio.interfaces.resolvedor_transporte import IResolvedorTransporte
from app.dominio.objetos_valor.distribucion import DistribucionDiscreta
from app.dominio.objetos_valor.transporte import Acoplamiento, MatrizCosto, ResultadoTransporte

logger = logging.getLogger(__name__)


class TransporteServicio:
    """
    Servicio de aplicación para el transporte óptimo entre distribuciones finitas.

    Delega el problema lineal en un IResolvedorTransporte y reconstruye a partir
    de sus potenciales un testigo dual h 1-Lipschitz respecto del coste.
    """
    def __init__(self, resolvedor: IResolvedorTransporte):
        """
        Args:
            resolvedor: Implementación del puerto de transporte (símplex de red exacto).
        """
        self.resolvedor = resolvedor

    def solve_ot(self, mu: DistribucionDiscreta, nu: DistribucionDiscreta, cost: MatrizCosto) -> ResultadoTransporte:
        """
        Resuelve W(c)(μ, ν) = min_γ ⟨γ, c⟩.

        Returns:
            Coste óptimo, acoplamiento |supp μ| × |supp ν| y potencial dual sobre el conjunto base.

        Raises:
            DistribucionInvalidaError: Si los soportes no caben en el coste.
            TransporteError: Si el resolvedor no alcanza el óptimo.
        """
        bloque = cost.submatriz(mu, nu)
        # Los puntos de peso nulo se retiran antes de resolver y se reinsertan con masa 0.
        filas = np.flatnonzero(mu.weights > 0)
        columnas = np.flatnonzero(nu.weights > 0)
        reducido = bloque[np.ix_(filas, columnas)]

        solucion = self.resolvedor.resolver(mu.weights[filas], nu.weights[columnas], reducido)

        plan = np.zeros(bloque.shape)
        plan[np.ix_(filas, columnas)] = solucion.plan
        costo = float(np.clip(np.sum(plan * bloque), 0.0, 1.0))

        soporte_destino = np.asarray(nu.support)[columnas]
        potencial = self._c_transformada(cost.values, soporte_destino, solucion.potencial_destino)

        return ResultadoTransporte(cost=costo, coupling=Acoplamiento(plan), potential=potencial)

    @staticmethod
    def _c_transformada(costes: np.ndarray, soporte_destino: np.ndarray, v: np.ndarray) -> np.ndarray:
        """
        h(x) = min_j (c(x, y_j) − v_j), desplazada para que min h = 0.

        Para un coste pseudométrico h es 1-Lipschitz y alcanza el valor dual.
        """
        h = np.min(costes[:, soporte_destino] - np.asarray(v)[None, :], axis=1)
        h = h - h.min()
        return np.clip(h, 0.0, 1.0)

    def verify_duality(
        self,
        result: ResultadoTransporte,
        mu: DistribucionDiscreta,
        nu: DistribucionDiscreta,
        cost: MatrizCosto,
        tol: Optional[float] = None,
    ) -> InformeDualidad:
        """
        Comprueba la dualidad de Kantorovich sobre un resultado.

        Es válido si el coste primal y ∫h dμ − ∫h dν coinciden dentro de `tol`,
        h es 1-Lipschitz respecto del coste y las marginales del acoplamiento
        son μ y ν.
        """
        tolerancia = settings.DUALITY_TOLERANCE if tol is None else tol
        brecha = abs(result.cost - result.valor_dual(mu, nu))
        h = np.asarray(result.potential)
        violacion_lipschitz = float(max(0.0, (np.abs(h[:, None] - h[None, :]) - cost.values).max()))
        desviacion_marginal = result.coupling.desviacion_marginal(mu, nu)
        desviacion_costo = abs(float(np.sum(result.coupling.matrix * cost.submatriz(mu, nu))) - result.cost)

        valido = (
            brecha <= tolerancia
            and violacion_lipschitz <= tolerancia
            and desviacion_marginal <= settings.MARGINAL_TOLERANCE
            and desviacion_costo <= settings.MARGINAL_TOLERANCE
        )
        if not valido:
            logger.warning(
                f"Dualidad no verificada: brecha={brecha:.3e}, lipschitz={violacion_lipschitz:.3e}, "
                f"marginales={desviacion_marginal:.3e}"
            )
        return InformeDualidad(
            valido=valido,
            brecha=brecha,
            violacion_lipschitz=violacion_lipschitz,
            desviacion_marginal=desviacion_marginal,
            desviacion_costo=desviacion_costo,
        )

    def wasserstein_limit_check(
        self,
        costs: Sequence[MatrizCosto],
        limit_cost: MatrizCosto,
        mu: DistribucionDiscreta,
        nu: DistribucionDiscreta,
        tol: float = 1e-9,
    ) -> InformeLimiteWasserstein:
        """
        Calcula W(c_k)(μ, ν) para una sucesión creciente c_k ≤ c.

        Raises:
            SecuenciaInvalidaError: Si la sucesión no es creciente o supera el límite.
        """
        if not costs:
            raise SecuenciaInvalidaError(0, "la sucesión está vacía")
        for k, (actual, siguiente) in enumerate(zip(costs, costs[1:])):
            if not siguiente.domina(actual):
                raise SecuenciaInvalidaError(k + 1, "no es mayor o igual que el coste anterior")
        for k, coste in enumerate(costs):
            if not limit_cost.domina(coste):
                raise SecuenciaInvalidaError(k, "supera al coste límite")

        valores = tuple(self.solve_ot(mu, nu, coste).cost for coste in costs)
        valor_limite = self.solve_ot(mu, nu, limit_cost).cost
        monotona = all(b >= a - tol for a, b in zip(valores, valores[1:]))
        brecha_final = valor_limite - valores[-1]
        return InformeLimiteWasserstein(
            valores=valores,
            valor_limite=valor_limite,
            monotona=monotona,
            brecha_final=brecha_final,
            converge=monotona and brecha_final >= -tol,
        )

    @staticmethod
    def dump_coupling_csv(
        result: ResultadoTransporte, mu: DistribucionDiscreta, nu: DistribucionDiscreta, ruta: Path
    ) -> Path:
        """Vuelca el acoplamiento como CSV (filas: soporte de μ, columnas: soporte de ν)."""
        if result.coupling.matrix.shape != (len(mu.support), len(nu.support)):
            raise DistribucionInvalidaError("el acoplamiento no corresponde a los soportes dados")
        digitos = settings.CSV_SIGNIFICANT_DIGITS
        lineas = ["origen," + ",".join(str(j) for j in nu.support)]
        for i, fila in zip(mu.support, result.coupling.matrix):
            lineas.append(f"{i}," + ",".join(f"{valor:.{digitos}g}" for valor in fila))
        ruta = Path(ruta)
        ruta.write_text("\n".join(lineas) + "\n", encoding="utf-8")
        logger.debug(f"Acoplamiento volcado en {ruta}")
        return ruta
