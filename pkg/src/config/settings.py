"""
Configuración principal del sistema.

Este módulo maneja la carga y validación de configuraciones desde variables
de entorno usando Pydantic para la validación de tipos y valores.
"""

from typing import Optional
from pathlib import Path
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv


# Configuración base para todas las settings
BASE_CONFIG = SettingsConfigDict(
    env_file=".env",
    env_file_encoding="utf-8",
    extra="ignore",
    case_sensitive=False,
    populate_by_name=True,
)


class LoggingConfig(BaseSettings):
    """Configuración de logging."""

    model_config = BASE_CONFIG

    level: str = Field(default="INFO", alias="LOG_LEVEL")
    file: Optional[str] = Field(default=None, alias="LOG_FILE")
    format: str = Field(default="%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    @field_validator("level")
    @classmethod
    def validate_level(cls, v):
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if v.upper() not in valid_levels:
            raise ValueError(f"Nivel de log debe ser uno de: {valid_levels}")
        return v.upper()


class SolverConfig(BaseSettings):
    """Parámetros del solucionador de autovalores."""

    model_config = BASE_CONFIG

    tol_inf: float = Field(default=1e-10, alias="EIG_TOL_INF")
    dense_limit: int = Field(default=1500, alias="EIG_DENSE_LIMIT")
    krylov_min: int = Field(default=40, alias="EIG_KRYLOV_MIN")
    max_restarts: int = Field(default=50, alias="EIG_MAX_RESTARTS")
    residual_tol: float = Field(default=1e-8, alias="EIG_RESIDUAL_TOL")
    arpack_tol: float = Field(default=1e-13, alias="EIG_ARPACK_TOL")

    @field_validator("tol_inf", "residual_tol", "arpack_tol")
    @classmethod
    def validate_tolerance(cls, v):
        if not 0.0 < v < 1.0:
            raise ValueError("La tolerancia debe estar en (0, 1)")
        return v

    @field_validator("dense_limit", "krylov_min", "max_restarts")
    @classmethod
    def validate_positive_int(cls, v):
        if v <= 0:
            raise ValueError("El valor debe ser positivo")
        return v


class RuntimeConfig(BaseSettings):
    """Configuración de ejecución (paralelismo)."""

    model_config = BASE_CONFIG

    threads: int = Field(default=1, alias="EIG_THREADS")

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v):
        if v < 1:
            raise ValueError("EIG_THREADS debe ser al menos 1")
        return v


class ApplicationConfig(BaseSettings):
    """Configuración general de la aplicación."""

    model_config = BASE_CONFIG

    name: str = Field(default="Autovalores Stokes Mixtos", alias="APP_NAME")
    version: str = Field(default="1.0.0", alias="APP_VERSION")
    output_dir: Path = Field(default=Path("app_outputs"), alias="APP_OUTPUT_DIR")

    @field_validator("output_dir", mode="before")
    @classmethod
    def validate_paths(cls, v):
        return Path(v) if isinstance(v, str) else v


def load_settings(env_file: Optional[str] = None) -> dict:
    """
    Carga la configuración desde el archivo de entorno especificado.

    Args:
        env_file: Ruta al archivo de variables de entorno (opcional)

    Returns:
        Diccionario con toda la configuración cargada

    Raises:
        FileNotFoundError: Si se indicó un archivo .env que no existe
        ValidationError: Si hay errores en la validación de configuración
    """
    if env_file is not None:
        env_path = Path(env_file)
        if not env_path.exists():
            raise FileNotFoundError(f"Archivo de configuración no encontrado: {env_file}")
        # Cargar variables de entorno explícitamente
        load_dotenv(env_path, override=True)

    return {
        "logging": LoggingConfig(),
        "solver": SolverConfig(),
        "runtime": RuntimeConfig(),
        "application": ApplicationConfig(),
    }


# Configuración global (se carga cuando se pide por primera vez)
_config: Optional[dict] = None


def get_settings() -> dict:
    """
    Obtiene la configuración global del sistema.

    Returns:
        Diccionario con la configuración global
    """
    global _config
    if _config is None:
        default_env = Path(".env")
        _config = load_settings(str(default_env) if default_env.exists() else None)
    return _config


def reset_settings() -> None:
    """Descarta la configuración en caché (útil en pruebas)."""
    global _config
    _config = None
