# app/cli/comandos/contexto.py
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from app.core.deps import get_proceso_servicio
from app.dominio.entidades.modelo_proceso import ModeloProceso
from app.dominio.objetos_valor.modo_trayectorias import ModoTrayectorias
from app.dominio.objetos_valor.rejilla_temporal import RejillaTemporal
from app.esquemas.configuracion import ConfiguracionEjecucion
from app.servicios.discretizacion_servicio import build_time_grid


@dataclass(frozen=True)
class ContextoEjecucion:
    """Modelo y rejilla temporal compartidos por los subcomandos."""
    config: ConfiguracionEjecucion
    model: ModeloProceso
    tg: RejillaTemporal

    @classmethod
    def desde_config(cls, config: ConfiguracionEjecucion) -> "ContextoEjecucion":
        model = get_proceso_servicio().build_model(config.process)
        tg = build_time_grid(config.discount, config.tolerances.epsilon_time, Fraction(config.tolerances.time_step))
        return cls(config=config, model=model, tg=tg)

    @property
    def etiquetas(self) -> list[str]:
        return list(self.model.space.labels)

    @property
    def modo_g(self) -> Optional[ModoTrayectorias]:
        """Modo de trayectorias de G; None cuando G no se ejecuta."""
        return self.config.modo_trayectorias if "G" in self.config.funcionales else None
