"""
Solucionador del problema generalizado K z = λ C z.

Estrategia: transformación espectral S = K⁻¹ C (desplazamiento θ = 0). Los
autovalores finitos λ corresponden a μ_S = 1/λ; la parte infinita del espectro
(multiplicador, bloques σ y p) se concentra en μ_S ≈ 0 y se filtra.

- ``shiftinvert``: factorización LU dispersa (SuperLU) + Arnoldi implícito (ARPACK)
- ``dense``: LU densa + QR de S (LAPACK), usado como oráculo
"""

import time
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigs, splu

from ..config.run_config import SolverKind
from ..config.settings import SolverConfig, get_settings
from ..fem.assembly import EigSystem
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

IMAGINARY_TOL = 1e-8


class SingularSaddlePointError(RuntimeError):
    """La factorización de K falló: singular saddle-point system."""


@dataclass
class Spectrum:
    """
    Autopares finitos y positivos del problema generalizado.

    Attributes:
        eigenvalues: λ ascendentes
        eigenvectors: Columnas z normalizadas con zᵀ(-C)z = 1
        residuals: ‖K z - λ C z‖ / ‖K z‖ por par
        nev_requested: Autovalores solicitados
        nev_converged: Autovalores reportados
        solver: Estrategia usada
        elapsed: Tiempo de solución en segundos
        warnings: Avisos (convergencia parcial, espectro vacío)
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    nev_requested: int
    nev_converged: int
    solver: SolverKind
    elapsed: float = 0.0
    warnings: List[str] = field(default_factory=list)

    @property
    def is_partial(self) -> bool:
        return self.nev_converged < self.nev_requested

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "residuals": [float(r) for r in self.residuals],
            "nev_requested": self.nev_requested,
            "nev_converged": self.nev_converged,
            "solver": self.solver.value,
            "elapsed": round(self.elapsed, 4),
            "warnings": list(self.warnings),
        }


def _finite_order(mu_values: np.ndarray, tol_inf: float) -> np.ndarray:
    """Índices de los μ_S finitos y positivos, ordenados por λ = 1/μ_S ascendente."""
    mu_values = np.asarray(mu_values)
    if mu_values.size == 0:
        return np.array([], dtype=int)
    scale = np.abs(mu_values).max()
    real = np.real(mu_values)
    keep = (
        (np.abs(mu_values) > tol_inf * scale)
        & (np.abs(np.imag(mu_values)) <= IMAGINARY_TOL * scale)
        & (real > 0)
    )
    idx = np.flatnonzero(keep)
    return idx[np.argsort(-real[idx], kind="stable")]


def filter_spectrum(mu_values, tol_inf: float = 1e-10) -> np.ndarray:
    """
    Convierte valores μ_S de K⁻¹C en autovalores finitos λ = 1/μ_S.

    Descarta |μ_S| <= tol_inf · max|μ_S| (λ infinitos) y μ_S < 0.

    Args:
        mu_values: Valores de la etapa de Krylov o densa
        tol_inf: Umbral relativo de la parte infinita

    Returns:
        λ ordenados de forma ascendente (posiblemente vacío)
    """
    order = _finite_order(np.asarray(mu_values), tol_inf)
    if order.size == 0:
        logger.warning(
            "Sin autovalores finitos positivos: aumente nev o la dimensión del subespacio de Krylov"
        )
    return 1.0 / np.real(np.asarray(mu_values)[order])


def _factorize(K: sparse.spmatrix):
    try:
        return splu(sparse.csc_matrix(K))
    except RuntimeError as exc:
        raise SingularSaddlePointError(f"singular saddle-point system: {exc}") from exc


def _dense_mu(K, C):
    K = K.toarray() if sparse.issparse(K) else np.asarray(K, dtype=float)
    C = C.toarray() if sparse.issparse(C) else np.asarray(C, dtype=float)
    lu, piv = linalg.lu_factor(K, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= np.finfo(float).eps * max(pivots.max(), 1.0) * K.shape[0]:
        raise SingularSaddlePointError("singular saddle-point system: pivote nulo en la LU densa")
    S = linalg.lu_solve((lu, piv), C)
    return linalg.eig(S)


def _shift_invert_mu(K, C, nev: int, config: SolverConfig):
    n = K.shape[0]
    lu = _factorize(K)
    C = sparse.csr_matrix(C)
    operator = LinearOperator((n, n), matvec=lambda x: lu.solve(C @ x), dtype=float)
    ncv = min(n - 1, max(4 * nev, config.krylov_min))
    v0 = np.ones(n) / np.sqrt(n)
    try:
        values, vectors = eigs(
            operator, k=nev, which="LM", v0=v0, ncv=ncv,
            maxiter=config.max_restarts, tol=config.arpack_tol,
        )
        return values, vectors, None
    except ArpackNoConvergence as exc:
        message = (
            f"ARPACK no convergió: {len(exc.eigenvalues)} de {nev} autovalores tras "
            f"{config.max_restarts} reinicios"
        )
        logger.warning(message)
        return exc.eigenvalues, exc.eigenvectors, message


def _normalize(z: np.ndarray, C) -> np.ndarray:
    """Fija la fase (entrada de mayor módulo positiva) y normaliza zᵀ(-C)z = 1."""
    pivot = z[np.argmax(np.abs(z))]
    z = np.real(z * (np.abs(pivot) / pivot))
    norm = float(z @ (-(C @ z)))
    if norm <= 0:
        norm = float(z @ z)
    return z / np.sqrt(norm)


def _relative_residual(K, C, lam: float, z: np.ndarray) -> float:
    Kz = K @ z
    return float(np.linalg.norm(Kz - lam * (C @ z)) / max(np.linalg.norm(Kz), np.finfo(float).tiny))


def solve_pencil(
    K,
    C,
    nev: int,
    solver: Union[SolverKind, str] = SolverKind.AUTO,
    config: Optional[SolverConfig] = None,
) -> Spectrum:
    """
    Resuelve K z = λ C z para los nev menores λ finitos y positivos.

    Args:
        K: Matriz simétrica no singular
        C: Matriz simétrica semidefinida negativa
        nev: Número de autovalores buscados (>= 1)
        solver: ``auto``, ``dense`` o ``shiftinvert``
        config: Parámetros del solucionador (por defecto los de entorno)

    Returns:
        Espectro con autovectores normalizados y residuos

    Raises:
        ValueError: nev inválido
        SingularSaddlePointError: Si K no puede factorizarse
    """
    if isinstance(nev, bool) or int(nev) != nev or nev < 1:
        raise ValueError(f"nev debe ser un entero >= 1 (recibido: {nev})")
    nev = int(nev)
    config = config or get_settings()["solver"]
    solver = SolverKind(getattr(solver, "value", solver))
    n = K.shape[0]

    if solver is SolverKind.AUTO:
        solver = SolverKind.DENSE if n <= config.dense_limit else SolverKind.SHIFTINVERT
    if solver is SolverKind.SHIFTINVERT and nev >= n - 1:
        logger.warning(f"nev={nev} demasiado grande para Arnoldi con n={n}; se usa el solucionador denso")
        solver = SolverKind.DENSE

    started = time.perf_counter()
    notes: List[str] = []
    if solver is SolverKind.DENSE:
        mu_values, vectors = _dense_mu(K, C)
    else:
        mu_values, vectors, note = _shift_invert_mu(K, C, nev, config)
        if note:
            notes.append(note)

    order = _finite_order(mu_values, config.tol_inf)[:nev]
    if order.size == 0:
        notes.append("Sin autovalores finitos positivos en el subespacio calculado")
        logger.warning(notes[-1])

    eigenvalues = 1.0 / np.real(mu_values[order])
    columns = [_normalize(vectors[:, j], C) for j in order]
    residuals = np.array([_relative_residual(K, C, lam, z) for lam, z in zip(eigenvalues, columns)])

    # Solo se reporta el prefijo de pares aceptados: los índices siguen siendo los menores λ
    rejected = np.flatnonzero(residuals > config.residual_tol)
    if rejected.size:
        first = int(rejected[0])
        notes.append(
            f"Residuo {residuals[first]:.2e} > {config.residual_tol:.0e} para λ={eigenvalues[first]:.6f}: "
            f"se reportan {first} de {nev} autovalores"
        )
        logger.warning(notes[-1])
        eigenvalues, residuals, columns = eigenvalues[:first], residuals[:first], columns[:first]
    eigenvectors = np.column_stack(columns) if columns else np.zeros((n, 0))

    elapsed = time.perf_counter() - started
    spectrum = Spectrum(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        residuals=residuals,
        nev_requested=nev,
        nev_converged=int(len(eigenvalues)),
        solver=solver,
        elapsed=elapsed,
        warnings=notes,
    )
    logger.debug(f"{solver.value}: n={n}, λ={np.round(eigenvalues, 6).tolist()} ({elapsed:.2f} s)")
    return spectrum


def solve_generalized(
    system: EigSystem,
    nev: int = 5,
    solver: Union[SolverKind, str] = SolverKind.AUTO,
    config: Optional[SolverConfig] = None,
) -> Spectrum:
    """
    Resuelve el problema de autovalores de Stokes ensamblado.

    Args:
        system: Sistema (K, C) de ``build_eig_system``
        nev: Número de autovalores
        solver: Estrategia de solución
        config: Parámetros del solucionador

    Returns:
        Espectro con ‖u_h‖₀ = 1 en cada autovector
    """
    return solve_pencil(system.K, system.C, nev, solver=solver, config=config)
