# app/core/deps.py
from pathlib import Path
from typing import Optional, Union

from app.core.config import settings

# --- Domain Imports (Interfaces) ---
from app.dominio.interfaces.escritor_artefactos import IEscritorArtefactos
from app.dominio.interfaces.resolvedor_transporte import IResolvedorTransporte

# --- Infrastructure Imports (Implementations) ---
from app.infraestructura.artefactos.escritor_artefactos import EscritorArtefactos
from app.infraestructura.configuracion.cargador_config import CargadorConfiguracion
from app.infraestructura.logica.parser_formulas import ParserFormulas
from app.infraestructura.transporte.pot_resolvedor import ResolvedorPOT

# --- Service Imports ---
from app.servicios.logica_servicio import LogicaServicio
from app.servicios.metrica_servicio import MetricaServicio
from app.servicios.proceso_servicio import ProcesoServicio
from app.servicios.transporte_servicio import TransporteServicio
from app.servicios.trayectorias_servicio import TrayectoriasServicio
from app.servicios.validacion_servicio import ValidacionServicio


# =================================================================
# ADAPTER PROVIDERS
# =================================================================
def get_resolvedor() -> IResolvedorTransporte:
    """
    Proporciona la implementación del puerto de transporte.

    Los servicios dependen de la interfaz (IResolvedorTransporte); aquí se
    decide la implementación concreta (símplex de red de POT).
    """
    return ResolvedorPOT(max_iteraciones=settings.OT_MAX_ITER)


def get_parser() -> ParserFormulas:
    return ParserFormulas()


def get_cargador() -> CargadorConfiguracion:
    return CargadorConfiguracion()


def get_escritor(directorio: Union[str, Path]) -> IEscritorArtefactos:
    """
    Proporciona un escritor de artefactos para un directorio de salida.

    El escritor se usa como gestor de contexto: adquiere el bloqueo del
    directorio al entrar y lo libera al salir.
    """
    return EscritorArtefactos(directorio)


# =================================================================
# APPLICATION SERVICE PROVIDERS
# =================================================================
def get_proceso_servicio() -> ProcesoServicio:
    return ProcesoServicio()


def get_trayectorias_servicio() -> TrayectoriasServicio:
    return TrayectoriasServicio(enumeration_cap=settings.ENUMERATION_CAP)


def get_transporte_servicio(resolvedor: Optional[IResolvedorTransporte] = None) -> TransporteServicio:
    return TransporteServicio(resolvedor or get_resolvedor())


def get_metrica_servicio(
    transporte: Optional[TransporteServicio] = None,
    trayectorias: Optional[TrayectoriasServicio] = None,
) -> MetricaServicio:
    """
    Servicio de métricas con el transporte exacto y la fuente de trayectorias.
    """
    return MetricaServicio(
        transporte or get_transporte_servicio(),
        trayectorias or get_trayectorias_servicio(),
        max_workers=settings.MAX_WORKERS,
    )


def get_logica_servicio(trayectorias: Optional[TrayectoriasServicio] = None) -> LogicaServicio:
    return LogicaServicio(trayectorias or get_trayectorias_servicio())


def get_validacion_servicio() -> ValidacionServicio:
    """
    Batería de invariantes: comparte un único servicio de transporte con el
    servicio de métricas para que ambos usen el mismo resolvedor.
    """
    transporte = get_transporte_servicio()
    return ValidacionServicio(
        proceso=get_proceso_servicio(),
        transporte=transporte,
        metrica=get_metrica_servicio(transporte=transporte),
    )
