"""
Configuraciones del sistema: variables de entorno y configuración de corridas.
"""

from .settings import (
    LoggingConfig,
    SolverConfig,
    RuntimeConfig,
    ApplicationConfig,
    load_settings,
    get_settings,
    reset_settings,
)
from .run_config import (
    Domain,
    Family,
    Formulation,
    SolverKind,
    ToleranceConfig,
    RunConfig,
)

__all__ = [
    "LoggingConfig",
    "SolverConfig",
    "RuntimeConfig",
    "ApplicationConfig",
    "load_settings",
    "get_settings",
    "reset_settings",
    "Domain",
    "Family",
    "Formulation",
    "SolverKind",
    "ToleranceConfig",
    "RunConfig",
]
