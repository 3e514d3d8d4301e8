"""
Estudio de convergencia sobre una sucesión de mallas.

Este módulo proporciona:
- Solución del problema de autovalores por nivel (opcionalmente en paralelo)
- Recuperación de la presión p_h = -R_h(tr σ_h / 2) y su residuo
- Ajuste de orden y valor extrapolado por autovalor
- Errores relativos e_λ por nivel
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd

from ..config.run_config import Formulation, RunConfig
from ..config.settings import RuntimeConfig, SolverConfig, get_settings
from ..fem.assembly import build_eig_system
from ..fem.space import FeSpace, SpaceKind
from ..mesh.generators import mesh_for
from ..solvers.eigsolve import solve_generalized
from ..utils.logger import setup_logger
from .fitting import FitResult, fit_order, relative_errors

logger = setup_logger(__name__)

CSV_COLUMNS = ["domain", "family", "k", "formulation", "N", "h", "i", "lambda_h"]


class StudyLevelError(RuntimeError):
    """Fallo del solucionador en un nivel de malla."""

    def __init__(self, N: int, cause: Exception):
        super().__init__(f"Nivel N={N}: {cause}")
        self.N = N
        self.cause = cause


@dataclass
class LevelResult:
    """Resultado de un nivel de malla."""

    N: int
    h: float
    eigenvalues: List[float]
    residuals: List[float]
    dim: int
    solver: str
    elapsed: float
    pressure_residual: Optional[float] = None
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "h": self.h,
            "eigenvalues": list(self.eigenvalues),
            "residuals": list(self.residuals),
            "dim": self.dim,
            "solver": self.solver,
            "elapsed": round(self.elapsed, 4),
            "pressure_residual": self.pressure_residual,
            "warnings": list(self.warnings),
        }


@dataclass
class ConvergenceReport:
    """
    Reporte de un estudio de convergencia.

    Attributes:
        config: Configuración de la corrida
        levels: Resultados por nivel, h decreciente
        fits: Ajuste (t, λ_extr) por índice de autovalor
        relative_errors: e_λ[i][l] por autovalor y nivel
    """

    config: RunConfig
    levels: List[LevelResult]
    fits: List[FitResult] = field(default_factory=list)
    relative_errors: List[List[float]] = field(default_factory=list)

    @property
    def n_eigenvalues(self) -> int:
        return min((len(level.eigenvalues) for level in self.levels), default=0)

    def eigenvalue_matrix(self) -> np.ndarray:
        """λ[i, l] para los m autovalores comunes a todos los niveles."""
        m = self.n_eigenvalues
        return np.array([level.eigenvalues[:m] for level in self.levels], dtype=float).T

    def recompute_relative_errors(self) -> np.ndarray:
        values = self.eigenvalue_matrix()
        return np.array([
            relative_errors(values[i], fit.extrapolated) for i, fit in enumerate(self.fits)
        ])

    def to_frame(self) -> pd.DataFrame:
        """Tabla con una fila por (nivel, índice de autovalor)."""
        cfg = self.config
        rows = [
            {
                "domain": cfg.domain.value,
                "family": cfg.family.value,
                "k": cfg.k,
                "formulation": cfg.formulation.value,
                "N": level.N,
                "h": level.h,
                "i": i + 1,
                "lambda_h": lam,
            }
            for level in self.levels
            for i, lam in enumerate(level.eigenvalues[: self.n_eigenvalues])
        ]
        return pd.DataFrame(rows, columns=CSV_COLUMNS)

    def to_dict(self) -> dict:
        return {
            "descriptor": self.config.descriptor,
            "config": self.config.model_dump(mode="json"),
            "levels": [level.to_dict() for level in self.levels],
            "fits": [fit.to_dict() for fit in self.fits],
            "relative_errors": [list(map(float, row)) for row in self.relative_errors],
        }


def recover_pressure(sigma_coeffs: np.ndarray, sigma_space: FeSpace, pressure_space: FeSpace) -> np.ndarray:
    """
    Presión recuperada: proyección L² elemento a elemento de -tr(σ_h)/2 sobre P_k.

    Args:
        sigma_coeffs: Coeficientes del pseudoesfuerzo
        sigma_space: Espacio de pseudoesfuerzos
        pressure_space: Espacio de presiones (misma malla y regla)

    Returns:
        Coeficientes de presión
    """
    if sigma_space.mesh is not pressure_space.mesh:
        raise ValueError("Los espacios deben estar definidos sobre la misma malla")
    if pressure_space.kind is not SpaceKind.PRESSURE:
        raise ValueError("Se esperaba el espacio de presiones")
    rule = pressure_space.rule
    sigma = sigma_space.evaluate(sigma_coeffs, ref_points=rule.points)
    target = -0.5 * (sigma[..., 0, 0] + sigma[..., 1, 1])
    basis, _ = pressure_space.ref.tabulate(rule.points)
    local = 2.0 * np.einsum("q,qa,cq->ca", rule.weights, basis, target)
    coeffs = np.zeros(pressure_space.ndof)
    coeffs[pressure_space.cell_dofs[:, 0, :]] = local
    return coeffs


def _pressure_residual(system, spectrum) -> Optional[float]:
    if system.pressure_space is None or spectrum.nev_converged == 0:
        return None
    z = spectrum.eigenvectors[:, 0]
    p_h = system.block("pressure", z)
    recovered = recover_pressure(system.block("sigma", z), system.sigma_space, system.pressure_space)
    norm = system.pressure_space.l2_norm(p_h)
    if norm == 0.0:
        return 0.0
    return system.pressure_space.l2_norm(p_h - recovered) / norm


def solve_level(N: int, config: RunConfig, solver_config: Optional[SolverConfig] = None) -> LevelResult:
    """
    Genera la malla, ensambla y resuelve un nivel.

    Raises:
        StudyLevelError: Si falla cualquier etapa del nivel
    """
    started = time.perf_counter()
    try:
        mesh = mesh_for(config.domain, N)
        system = build_eig_system(mesh, config.family, config.k, config.formulation, mu=config.mu)
        spectrum = solve_generalized(system, nev=config.nev, solver=config.solver, config=solver_config)
        pressure_residual = (
            _pressure_residual(system, spectrum) if config.formulation is Formulation.FULL else None
        )
    except Exception as exc:
        logger.error(f"❌ Error en el nivel N={N}: {exc}")
        raise StudyLevelError(N, exc) from exc

    elapsed = time.perf_counter() - started
    logger.info(
        f"N={N}: dim={system.dim}, λ={np.round(spectrum.eigenvalues, 5).tolist()} ({elapsed:.2f} s)"
    )
    return LevelResult(
        N=N,
        h=mesh.h,
        eigenvalues=[float(v) for v in spectrum.eigenvalues],
        residuals=[float(r) for r in spectrum.residuals],
        dim=system.dim,
        solver=spectrum.solver.value,
        elapsed=elapsed,
        pressure_residual=pressure_residual,
        warnings=list(spectrum.warnings),
    )


def run_convergence_study(
    config: RunConfig,
    solver_config: Optional[SolverConfig] = None,
    runtime: Optional[RuntimeConfig] = None,
) -> ConvergenceReport:
    """
    Ejecuta el estudio completo para una configuración.

    Los niveles son independientes y se resuelven con hasta EIG_THREADS hilos;
    el reporte conserva el orden de los niveles.

    Args:
        config: Configuración validada
        solver_config: Parámetros del solucionador
        runtime: Configuración de paralelismo

    Returns:
        Reporte con ajustes y errores relativos (si hay al menos 3 niveles)

    Raises:
        StudyLevelError: Si falla un nivel
    """
    settings = get_settings() if solver_config is None or runtime is None else {}
    solver_config = solver_config or settings["solver"]
    runtime = runtime or settings["runtime"]
    workers = max(1, min(runtime.threads, len(config.levels)))

    logger.info(
        f"Estudio {config.descriptor}: niveles {list(config.levels)}, nev={config.nev}, hilos={workers}"
    )
    if workers == 1:
        levels = [solve_level(N, config, solver_config) for N in config.levels]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            levels = list(executor.map(lambda N: solve_level(N, config, solver_config), config.levels))

    report = ConvergenceReport(config=config, levels=levels)
    m = report.n_eigenvalues
    if m < config.nev:
        logger.warning(f"Solo {m} autovalores comunes a todos los niveles (nev={config.nev})")

    if len(levels) >= 3 and m > 0:
        values = report.eigenvalue_matrix()
        h = [level.h for level in levels]
        report.fits = [fit_order(zip(h, values[i])) for i in range(m)]
        report.relative_errors = report.recompute_relative_errors().tolist()
        for i, fit in enumerate(report.fits):
            logger.info(f"λ{i + 1}: orden {fit.order:.2f}, λ_extr = {fit.extrapolated:.5f}")
    else:
        logger.warning("Se requieren al menos 3 niveles para ajustar órdenes")
    return report
