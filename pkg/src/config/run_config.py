"""
Configuración de una corrida de convergencia.

Define los enumerados del esquema (dominio, familia, formulación, solucionador)
y el modelo ``RunConfig`` validado con Pydantic. Todos los errores de un mismo
archivo o conjunto de flags se reportan juntos en un único ``ValidationError``.
"""

from enum import Enum
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .settings import get_settings


class Domain(str, Enum):
    """Dominios bidimensionales soportados"""
    SQUARE = "square"
    LSHAPE = "lshape"
    DISK = "disk"


class Family(str, Enum):
    """Familias H(div) para el pseudoesfuerzo"""
    RT = "rt"
    BDM = "bdm"


class Formulation(str, Enum):
    """Formulación discreta: completa (σ, p, u) o reducida (σ, u)"""
    FULL = "full"
    REDUCED = "reduced"


class SolverKind(str, Enum):
    """Estrategia del solucionador de autovalores"""
    AUTO = "auto"
    DENSE = "dense"
    SHIFTINVERT = "shiftinvert"


CONVEX_DOMAINS = (Domain.SQUARE, Domain.DISK)


class ToleranceConfig(BaseModel):
    """Tolerancias de comparación contra las tablas de referencia."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    tol_extr: Optional[float] = None
    tol_order: float = 0.3
    tol_level: float = 0.01

    @field_validator("tol_extr", "tol_order", "tol_level")
    @classmethod
    def validate_positive(cls, v):
        if v is not None and v <= 0:
            raise ValueError("las tolerancias deben ser positivas")
        return v

    def extr_for(self, domain: Domain) -> float:
        """Tolerancia relativa de λ_extr según el dominio (0.2% convexos, 1% L)."""
        if self.tol_extr is not None:
            return self.tol_extr
        return 0.002 if domain in CONVEX_DOMAINS else 0.01


class RunConfig(BaseModel):
    """
    Configuración validada de un estudio de convergencia.

    Los valores por defecto reproducen las condiciones de los experimentos:
    u = 0 en la frontera y μ = 1/2.
    """

    model_config = ConfigDict(extra="forbid", frozen=True, use_enum_values=False)

    domain: Domain
    family: Family
    k: int
    formulation: Formulation = Formulation.FULL
    levels: List[int]
    nev: int = 5
    mu: float = 0.5
    output_dir: Path = Field(default_factory=lambda: get_settings()["application"].output_dir)
    solver: SolverKind = SolverKind.AUTO
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)

    @field_validator("k")
    @classmethod
    def validate_k(cls, v):
        if not 0 <= v <= 2:
            raise ValueError("k debe estar en {0, 1, 2}")
        return v

    @field_validator("levels")
    @classmethod
    def validate_levels(cls, v):
        if not v:
            raise ValueError("levels no puede estar vacío")
        if any(n < 1 for n in v):
            raise ValueError("cada nivel N debe ser >= 1")
        if len(set(v)) != len(v):
            raise ValueError("levels no puede repetir valores de N")
        return sorted(v)

    @field_validator("nev")
    @classmethod
    def validate_nev(cls, v):
        if v < 1:
            raise ValueError("nev debe ser >= 1")
        return v

    @field_validator("mu")
    @classmethod
    def validate_mu(cls, v):
        if v <= 0:
            raise ValueError("mu debe ser positivo (mu must be positive)")
        return v

    @property
    def descriptor(self) -> str:
        """Nombre base de los archivos de salida derivado del esquema."""
        return f"{self.domain.value}_{self.family.value}_k{self.k}_{self.formulation.value}"
