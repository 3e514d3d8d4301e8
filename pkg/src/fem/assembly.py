"""
Ensamblaje de formas bilineales y del problema de autovalores generalizado.

Este módulo proporciona:
- a₀(σ, τ) = (1/2μ) ∫ σ^d : τ^d (formulación reducida)
- a((σ, p), (τ, q)) = a₀(σ, τ) + (γ/μ) ∫ (p + tr σ/2)(q + tr τ/2) (formulación completa)
- b(τ, v) = ∫ v · div τ (divergencia por filas)
- masa de velocidades, matriz de Gram H(div) y constante inf-sup discreta
- ``build_eig_system``: par (K, C) con K z = λ C z y C = -M en el bloque de velocidades
"""

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy import linalg, sparse

from ..config.run_config import Family, Formulation
from ..mesh.mesh import Mesh
from ..utils.logger import setup_logger
from .piola import piola_batch
from .space import (
    FeSpace,
    SpaceKind,
    TraceConstraint,
    build_pressure_space,
    build_pseudostress_space,
    build_trace_constraint,
    build_velocity_space,
)

logger = setup_logger(__name__)


def _scatter(row_dofs, col_dofs, local, shape) -> sparse.csr_matrix:
    """Inserta matrices elementales (nc, m, n) en una matriz CSR sumando duplicados."""
    rows = np.broadcast_to(row_dofs[:, :, None], local.shape).ravel()
    cols = np.broadcast_to(col_dofs[:, None, :], local.shape).ravel()
    matrix = sparse.coo_matrix((local.ravel(), (rows, cols)), shape=shape).tocsr()
    matrix.sum_duplicates()
    return matrix


def _symmetrize(matrix: sparse.spmatrix) -> sparse.csr_matrix:
    return ((matrix + matrix.T) * 0.5).tocsr()


def _check_same_mesh(*spaces: FeSpace) -> None:
    mesh = spaces[0].mesh
    if any(s.mesh is not mesh for s in spaces[1:]):
        raise ValueError("Los espacios deben estar definidos sobre la misma malla")
    rule = spaces[0].rule
    if any(s.rule is not rule for s in spaces[1:]):
        raise ValueError("Los espacios deben compartir la regla de cuadratura")


def _check_mu(mu: float) -> float:
    if not mu > 0:
        raise ValueError(f"mu debe ser positivo (recibido: {mu})")
    return float(mu)


class _SigmaTables:
    """Valores físicos de la base del pseudoesfuerzo y pesos por celda."""

    def __init__(self, space: FeSpace):
        if space.kind is not SpaceKind.PSEUDOSTRESS:
            raise ValueError("Se esperaba el espacio de pseudoesfuerzos")
        _, jac, det = space.mesh.jacobians()
        self.space = space
        self.wdet = space.rule.weights[None, :] * np.abs(det)[:, None]
        values, divs = piola_batch(jac, det, space.ref.values, space.ref.divergences)
        signs = space.cell_signs[:, None, :]
        self.values = values * signs[..., None]   # (nc, nq, dim, 2)
        self.divs = divs * signs                  # (nc, nq, dim)
        self.dofs = space.cell_dofs.reshape(space.mesh.n_cells, -1)

    def gram(self) -> np.ndarray:
        return np.einsum("cq,cqid,cqjd->cij", self.wdet, self.values, self.values)

    def trace_products(self) -> np.ndarray:
        """∫ ψ_i[r] ψ_j[s] como (nc, 2, dim, 2, dim)."""
        return np.einsum("cq,cqir,cqjs->crisj", self.wdet, self.values, self.values)

    def block_diagonal(self, per_row: np.ndarray) -> np.ndarray:
        """δ_rs X_ij como (nc, 2, dim, 2, dim)."""
        nc, dim, _ = per_row.shape
        out = np.zeros((nc, 2, dim, 2, dim))
        for r in range(2):
            out[:, r, :, r, :] = per_row
        return out


def _a0_local(tables: _SigmaTables, mu: float) -> np.ndarray:
    local = tables.block_diagonal(tables.gram()) - 0.5 * tables.trace_products()
    return local / (2.0 * mu)


def assemble_a0(sigma_space: FeSpace, mu: float = 0.5) -> sparse.csr_matrix:
    """
    Matriz de a₀(σ, τ) = (1/2μ) ∫ σ^d : τ^d con dev τ = τ - (tr τ / 2) I.

    Args:
        sigma_space: Espacio de pseudoesfuerzos
        mu: Viscosidad (> 0)

    Returns:
        Matriz simétrica semidefinida positiva (nσ, nσ)
    """
    mu = _check_mu(mu)
    tables = _SigmaTables(sigma_space)
    nc = sigma_space.mesh.n_cells
    local = _a0_local(tables, mu).reshape(nc, tables.dofs.shape[1], -1)
    n = sigma_space.ndof
    return _symmetrize(_scatter(tables.dofs, tables.dofs, local, (n, n)))


def assemble_a_full(
    sigma_space: FeSpace, pressure_space: FeSpace, mu: float = 0.5, gamma: float = 1.0
) -> sparse.csr_matrix:
    """
    Matriz del bloque (σ, p) de la formulación completa.

    a((σ, p), (τ, q)) = (1/2μ) ∫ σ^d : τ^d + (γ/μ) ∫ (p + tr σ/2)(q + tr τ/2)

    Args:
        sigma_space: Espacio de pseudoesfuerzos
        pressure_space: Espacio de presiones
        mu: Viscosidad (> 0)
        gamma: Parámetro de estabilización (1 en todos los experimentos)

    Returns:
        Matriz simétrica (nσ + np, nσ + np) con orden de bloques (σ, p)
    """
    mu = _check_mu(mu)
    _check_same_mesh(sigma_space, pressure_space)
    tables = _SigmaTables(sigma_space)
    nc = sigma_space.mesh.n_cells
    factor = gamma / mu
    q = pressure_space.ref.values  # (nq, dimP)

    ss = _a0_local(tables, mu) + 0.25 * factor * tables.trace_products()
    sp = 0.5 * factor * np.einsum("cq,cqir,qa->cria", tables.wdet, tables.values, q)
    pp = factor * np.einsum("cq,qa,qb->cab", tables.wdet, q, q)

    n_sigma = sigma_space.ndof
    n = n_sigma + pressure_space.ndof
    p_dofs = pressure_space.cell_dofs[:, 0, :] + n_sigma
    m = tables.dofs.shape[1]

    blocks = [
        _scatter(tables.dofs, tables.dofs, ss.reshape(nc, m, m), (n, n)),
        _scatter(tables.dofs, p_dofs, sp.reshape(nc, m, -1), (n, n)),
        _scatter(p_dofs, tables.dofs, sp.reshape(nc, m, -1).transpose(0, 2, 1), (n, n)),
        _scatter(p_dofs, p_dofs, pp, (n, n)),
    ]
    return _symmetrize(sum(blocks[1:], blocks[0]))


def assemble_b(sigma_space: FeSpace, velocity_space: FeSpace) -> sparse.csr_matrix:
    """
    Matriz B[v, σ] = ∫ φ_v · div φ_σ con divergencia por filas.

    Args:
        sigma_space: Espacio de pseudoesfuerzos
        velocity_space: Espacio de velocidades

    Returns:
        Matriz rectangular (nu, nσ)
    """
    _check_same_mesh(sigma_space, velocity_space)
    tables = _SigmaTables(sigma_space)
    q = velocity_space.ref.values
    local = np.einsum("cq,qa,cqi->cai", tables.wdet, q, tables.divs)
    shape = (velocity_space.ndof, sigma_space.ndof)
    return sum(
        _scatter(velocity_space.cell_dofs[:, r, :], sigma_space.cell_dofs[:, r, :], local, shape)
        for r in range(2)
    ).tocsr()


def assemble_mass_u(velocity_space: FeSpace) -> sparse.csr_matrix:
    """Masa diagonal por bloques del espacio discontinuo (|T| I con la base ortonormal)."""
    _, _, det = velocity_space.mesh.jacobians()
    wdet = velocity_space.rule.weights[None, :] * np.abs(det)[:, None]
    q = velocity_space.ref.values
    local = np.einsum("cq,qa,qb->cab", wdet, q, q)
    n = velocity_space.ndof
    mass = sum(
        _scatter(velocity_space.cell_dofs[:, r, :], velocity_space.cell_dofs[:, r, :], local, (n, n))
        for r in range(velocity_space.rows)
    )
    return _symmetrize(mass)


def assemble_hdiv_gram(sigma_space: FeSpace) -> sparse.csr_matrix:
    """Producto interior H(div): ∫ σ : τ + ∫ div σ · div τ."""
    tables = _SigmaTables(sigma_space)
    per_row = tables.gram() + np.einsum("cq,cqi,cqj->cij", tables.wdet, tables.divs, tables.divs)
    nc = sigma_space.mesh.n_cells
    local = tables.block_diagonal(per_row).reshape(nc, tables.dofs.shape[1], -1)
    n = sigma_space.ndof
    return _symmetrize(_scatter(tables.dofs, tables.dofs, local, (n, n)))


def inf_sup_constant(sigma_space: FeSpace, velocity_space: FeSpace) -> float:
    """
    Constante inf-sup discreta de b en las normas H(div) × L² (cálculo denso).

    β² es el menor autovalor de B H⁻¹ Bᵀ v = β² M v.

    Args:
        sigma_space: Espacio de pseudoesfuerzos
        velocity_space: Espacio de velocidades

    Returns:
        β > 0 si B tiene rango completo por filas
    """
    H = assemble_hdiv_gram(sigma_space).toarray()
    B = assemble_b(sigma_space, velocity_space).toarray()
    M = assemble_mass_u(velocity_space).toarray()
    schur = B @ linalg.cho_solve(linalg.cho_factor(H), B.T)
    schur = 0.5 * (schur + schur.T)
    smallest = linalg.eigh(schur, M, eigvals_only=True, subset_by_index=[0, 0])[0]
    return float(np.sqrt(max(smallest, 0.0)))


@dataclass(frozen=True, eq=False)
class EigSystem:
    """
    Problema K z = λ C z.

    Attributes:
        K: Matriz simétrica de punto silla
        C: -M en el bloque de velocidades, cero en el resto
        block_layout: Rango [inicio, fin) de cada bloque (sigma, [pressure], velocity, multiplier)
        formulation: Formulación completa o reducida
        mu: Viscosidad
        gamma: Parámetro γ
        sigma_space: Espacio de pseudoesfuerzos
        velocity_space: Espacio de velocidades
        pressure_space: Espacio de presiones (solo formulación completa)
        trace: Restricción de traza media nula
    """

    K: sparse.csr_matrix
    C: sparse.csr_matrix
    block_layout: Dict[str, Tuple[int, int]]
    formulation: Formulation
    mu: float
    gamma: float
    sigma_space: FeSpace
    velocity_space: FeSpace
    pressure_space: Optional[FeSpace] = None
    trace: Optional[TraceConstraint] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return int(self.K.shape[0])

    def block(self, name: str, z: np.ndarray) -> np.ndarray:
        """Extrae el bloque ``name`` de un vector (o de las columnas de una matriz)."""
        start, stop = self.block_layout[name]
        return z[start:stop] if z.ndim == 1 else z[start:stop, :]


def build_eig_system(
    mesh: Mesh,
    family: Union[Family, str],
    k: int,
    formulation: Union[Formulation, str] = Formulation.FULL,
    mu: float = 0.5,
    gamma: float = 1.0,
) -> EigSystem:
    """
    Ensambla el problema de autovalores discreto.

    Reducida: K = [[A₀, Bᵀ, t], [B, 0, 0], [tᵀ, 0, 0]].
    Completa: K = [[A_σσ, A_σp, Bᵀ, t], [A_pσ, A_pp, 0, 0], [B, 0, 0, 0], [tᵀ, 0, 0, 0]].

    Args:
        mesh: Malla
        family: ``rt`` (RT_k) o ``bdm`` (BDM_{k+1})
        k: Grado de velocidad y presión
        formulation: ``full`` o ``reduced``
        mu: Viscosidad
        gamma: Parámetro γ

    Returns:
        Sistema ensamblado
    """
    formulation = Formulation(getattr(formulation, "value", formulation))
    mu = _check_mu(mu)
    started = time.perf_counter()

    sigma_space = build_pseudostress_space(mesh, family, k)
    velocity_space = build_velocity_space(mesh, k, rule=sigma_space.rule)
    pressure_space = None
    trace = build_trace_constraint(sigma_space)
    t = sparse.csr_matrix(trace.vector[:, None])
    B = assemble_b(sigma_space, velocity_space)

    if formulation is Formulation.FULL:
        pressure_space = build_pressure_space(mesh, k, rule=sigma_space.rule)
        A = assemble_a_full(sigma_space, pressure_space, mu=mu, gamma=gamma)
        n_sp = sigma_space.ndof + pressure_space.ndof
        B_ext = sparse.hstack([B, sparse.csr_matrix((B.shape[0], pressure_space.ndof))]).tocsr()
        t_ext = sparse.vstack([t, sparse.csr_matrix((pressure_space.ndof, 1))]).tocsr()
        layout_names = ["sigma", "pressure", "velocity", "multiplier"]
        sizes = [sigma_space.ndof, pressure_space.ndof, velocity_space.ndof, 1]
    else:
        A = assemble_a0(sigma_space, mu=mu)
        n_sp = sigma_space.ndof
        B_ext, t_ext = B, t
        layout_names = ["sigma", "velocity", "multiplier"]
        sizes = [sigma_space.ndof, velocity_space.ndof, 1]

    K = sparse.bmat(
        [[A, B_ext.T, t_ext], [B_ext, None, None], [t_ext.T, None, None]],
        format="csr",
    )
    mass = assemble_mass_u(velocity_space)
    C = sparse.block_diag(
        [sparse.csr_matrix((n_sp, n_sp)), -mass, sparse.csr_matrix((1, 1))],
        format="csr",
    )

    offsets = np.concatenate([[0], np.cumsum(sizes)])
    layout = {name: (int(offsets[i]), int(offsets[i + 1])) for i, name in enumerate(layout_names)}

    logger.info(
        f"Sistema {formulation.value} ensamblado: N={mesh.resolution}, dim={K.shape[0]}, "
        f"nnz={K.nnz} ({time.perf_counter() - started:.2f} s)"
    )
    return EigSystem(
        K=K,
        C=C,
        block_layout=layout,
        formulation=formulation,
        mu=mu,
        gamma=gamma,
        sigma_space=sigma_space,
        velocity_space=velocity_space,
        pressure_space=pressure_space,
        trace=trace,
    )


def export_coo(matrix: sparse.spmatrix, path: Union[str, Path]) -> Path:
    """
    Exporta una matriz en tripletes ``i j valor`` (índices desde 0).

    Args:
        matrix: Matriz dispersa
        path: Archivo de salida

    Returns:
        Ruta escrita
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    coo = sparse.coo_matrix(matrix)
    order = np.lexsort((coo.col, coo.row))
    with path.open("w", encoding="utf-8") as handle:
        for i, j, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            handle.write(f"{i} {j} {v:.17g}\n")
    logger.debug(f"Matriz {matrix.shape} exportada a {path}")
    return path
