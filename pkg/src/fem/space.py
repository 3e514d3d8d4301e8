"""
Espacios globales de elementos finitos.

Este módulo proporciona:
- Espacio tensorial de pseudoesfuerzos (filas RT_k o BDM_{k+1}, conformes en H(div))
- Espacios discontinuos de velocidad [P_k]^2 y presión P_k
- Vector de restricción de traza t_i = ∫ tr φ_i

Numeración del pseudoesfuerzo: índice = fila * n_row + índice escalar; dentro de
una fila primero las aristas (e * (m+1) + j) y luego los interiores por celda.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from ..config.run_config import Family
from ..mesh.mesh import Mesh
from ..utils.logger import setup_logger
from .piola import piola_batch
from .quadrature import QuadRule, quadrature_rule
from .reference import ReferenceBasis, bdm_basis, pk_basis, rt_basis

logger = setup_logger(__name__)

MAX_SCHEME_DEGREE = 2


class SpaceKind(str, Enum):
    """Tipo de espacio global"""
    PSEUDOSTRESS = "pseudostress"
    VELOCITY = "velocity"
    PRESSURE = "pressure"


def assembly_rule(k: int) -> QuadRule:
    """Regla de ensamblaje para el parámetro de esquema k: grado 2(k+2)."""
    return quadrature_rule(min(10, 2 * (int(k) + 2)))


def _check_scheme_degree(k: int) -> int:
    if isinstance(k, bool) or int(k) != k or not 0 <= k <= MAX_SCHEME_DEGREE:
        raise ValueError(f"k debe estar en {{0, 1, 2}} (recibido: {k})")
    return int(k)


@dataclass(frozen=True, eq=False)
class FeSpace:
    """
    Espacio global con su mapa celda -> grados de libertad.

    Attributes:
        kind: Tipo de espacio
        mesh: Malla subyacente
        family: Familia H(div) (solo pseudoesfuerzo)
        degree: Parámetro k del esquema
        ref: Base de referencia de una fila/componente
        ndof: Número total de grados de libertad
        cell_dofs: Índices globales (nc, rows, dim)
        cell_signs: Signos ±1 por función local (nc, dim), iguales en todas las filas
        rows: 2 (tensor o vector) o 1 (escalar)
    """

    kind: SpaceKind
    mesh: Mesh
    family: Optional[Family]
    degree: int
    ref: ReferenceBasis
    ndof: int
    cell_dofs: np.ndarray
    cell_signs: np.ndarray
    rows: int

    @property
    def n_row(self) -> int:
        """Grados de libertad por fila o componente."""
        return self.ndof // self.rows

    @property
    def rule(self) -> QuadRule:
        return self.ref.rule

    def local_coefficients(self, coeffs: np.ndarray, cells=None) -> np.ndarray:
        """Coeficientes locales con signo (len(cells), rows, dim)."""
        cells = np.arange(self.mesh.n_cells) if cells is None else np.asarray(cells)
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.ndof,):
            raise ValueError(f"Se esperaban {self.ndof} coeficientes, recibidos {coeffs.shape}")
        return coeffs[self.cell_dofs[cells]] * self.cell_signs[cells][:, None, :]

    def _physical_basis(self, cells: np.ndarray, ref_points: Optional[np.ndarray]):
        if ref_points is None:
            values, divs = self.ref.values, self.ref.divergences
        else:
            values, divs = self.ref.tabulate(ref_points)
        if not self.ref.is_vector:
            return values, None
        _, jac, det = self.mesh.jacobians()
        return piola_batch(jac[cells], det[cells], values, divs)

    def evaluate(self, coeffs: np.ndarray, cells=None, ref_points=None) -> np.ndarray:
        """
        Evalúa el campo global en las imágenes de puntos de referencia.

        Args:
            coeffs: Vector global de coeficientes (ndof,)
            cells: Celdas a evaluar (por defecto todas)
            ref_points: Puntos de referencia (np, 2); por defecto los de la regla

        Returns:
            Pseudoesfuerzo (nc, np, 2, 2) con índice [fila, componente];
            velocidad (nc, np, 2); presión (nc, np)
        """
        cells = np.arange(self.mesh.n_cells) if cells is None else np.asarray(cells)
        local = self.local_coefficients(coeffs, cells)
        values, _ = self._physical_basis(cells, ref_points)
        if self.kind is SpaceKind.PSEUDOSTRESS:
            return np.einsum("cpki,crk->cpri", values, local)
        field = np.einsum("pk,crk->cpr", values, local)
        return field[..., 0] if self.rows == 1 else field

    def evaluate_divergence(self, coeffs: np.ndarray, cells=None, ref_points=None) -> np.ndarray:
        """Divergencia por filas del pseudoesfuerzo: (nc, np, 2)."""
        if self.kind is not SpaceKind.PSEUDOSTRESS:
            raise ValueError("La divergencia solo está definida para el pseudoesfuerzo")
        cells = np.arange(self.mesh.n_cells) if cells is None else np.asarray(cells)
        local = self.local_coefficients(coeffs, cells)
        _, divs = self._physical_basis(cells, ref_points)
        return np.einsum("cpk,crk->cpr", divs, local)

    def l2_norm(self, coeffs: np.ndarray) -> float:
        """Norma L² del campo global calculada con la regla de ensamblaje."""
        values = self.evaluate(coeffs)
        squared = values ** 2
        while squared.ndim > 2:
            squared = squared.sum(axis=-1)
        det = np.abs(self.mesh.jacobians()[2])
        return float(np.sqrt(np.sum(det[:, None] * self.rule.weights[None, :] * squared)))


def _as_family(family: Union[Family, str]) -> Family:
    try:
        return Family(getattr(family, "value", family))
    except ValueError:
        raise ValueError(f"Familia no soportada: {family}. Opciones: rt, bdm")


def build_pseudostress_space(
    mesh: Mesh, family: Union[Family, str], k: int, rule: Optional[QuadRule] = None
) -> FeSpace:
    """
    Construye el espacio tensorial H^σ_h con filas RT_k o BDM_{k+1}.

    Args:
        mesh: Malla conforme
        family: ``rt`` o ``bdm``
        k: Parámetro del esquema (0 <= k <= 2)
        rule: Regla de cuadratura (por defecto la de ensamblaje)

    Returns:
        Espacio con aristas compartidas y signos de orientación

    Raises:
        ValueError: Familia o grado no soportados
    """
    family = _as_family(family)
    k = _check_scheme_degree(k)
    rule = rule or assembly_rule(k)
    ref = rt_basis(k, rule) if family is Family.RT else bdm_basis(k + 1, rule)

    per_edge = ref.edge_dofs
    n_int = ref.interior_dofs
    n_row = mesh.n_edges * per_edge + mesh.n_cells * n_int

    nc = mesh.n_cells
    scalar = np.empty((nc, ref.dim), dtype=np.int64)
    signs = np.ones((nc, ref.dim))
    cell_ids = np.arange(nc)
    for i, meta in enumerate(ref.dof_meta):
        if meta.kind == "edge":
            scalar[:, i] = mesh.cell_edges[:, meta.entity] * per_edge + meta.index
            signs[:, i] = mesh.cell_edge_signs[:, meta.entity].astype(float) ** (meta.index + 1)
        else:
            scalar[:, i] = mesh.n_edges * per_edge + cell_ids * n_int + meta.index

    cell_dofs = np.stack([scalar + r * n_row for r in range(2)], axis=1)
    space = FeSpace(
        kind=SpaceKind.PSEUDOSTRESS,
        mesh=mesh,
        family=family,
        degree=k,
        ref=ref,
        ndof=2 * n_row,
        cell_dofs=cell_dofs,
        cell_signs=signs,
        rows=2,
    )
    logger.debug(
        f"Espacio de pseudoesfuerzos {ref.family.value}: {space.ndof} gdl "
        f"({mesh.n_edges} aristas, {nc} celdas)"
    )
    return space


def _build_discontinuous(mesh: Mesh, k: int, rows: int, kind: SpaceKind, rule) -> FeSpace:
    k = _check_scheme_degree(k)
    rule = rule or assembly_rule(k)
    ref = pk_basis(k, rule)
    nc, dim = mesh.n_cells, ref.dim
    block = np.arange(nc * dim, dtype=np.int64).reshape(nc, dim)
    cell_dofs = np.stack([block + r * nc * dim for r in range(rows)], axis=1)
    return FeSpace(
        kind=kind,
        mesh=mesh,
        family=None,
        degree=k,
        ref=ref,
        ndof=rows * nc * dim,
        cell_dofs=cell_dofs,
        cell_signs=np.ones((nc, dim)),
        rows=rows,
    )


def build_velocity_space(mesh: Mesh, k: int, rule: Optional[QuadRule] = None) -> FeSpace:
    """
    Espacio discontinuo [P_k]^2, numerado por componente, celda y función local.

    Args:
        mesh: Malla
        k: Grado polinomial (0 <= k <= 2)
        rule: Regla de cuadratura (por defecto la de ensamblaje)

    Returns:
        Espacio con 2 · celdas · dim(P_k) grados de libertad
    """
    return _build_discontinuous(mesh, k, 2, SpaceKind.VELOCITY, rule)


def build_pressure_space(mesh: Mesh, k: int, rule: Optional[QuadRule] = None) -> FeSpace:
    """Espacio discontinuo P_k con celdas · dim(P_k) grados de libertad."""
    return _build_discontinuous(mesh, k, 1, SpaceKind.PRESSURE, rule)


@dataclass(frozen=True, eq=False)
class TraceConstraint:
    """Vector t con t_i = ∫_Ω tr φ_i sobre el espacio de pseudoesfuerzos."""

    vector: np.ndarray
    space: FeSpace

    def mean_trace(self, coeffs: np.ndarray) -> float:
        """∫_Ω tr σ_h para los coeficientes dados."""
        return float(self.vector @ np.asarray(coeffs, dtype=float))


def build_trace_constraint(space: FeSpace) -> TraceConstraint:
    """
    Ensambla el vector de restricción de traza media nula.

    Para la fila r la traza de e_r ⊗ ψ es la componente r de ψ, y
    ∫_T ψ = Σ_q w_q J ψ̂(x̂_q) con la transformación de Piola.

    Args:
        space: Espacio de pseudoesfuerzos

    Returns:
        Restricción de traza
    """
    if space.kind is not SpaceKind.PSEUDOSTRESS:
        raise ValueError("La restricción de traza requiere el espacio de pseudoesfuerzos")
    ref_integrals = np.einsum("q,qkj->kj", space.rule.weights, space.ref.values)
    _, jac, _ = space.mesh.jacobians()
    cell_integrals = np.einsum("cij,kj->cki", jac, ref_integrals) * space.cell_signs[:, :, None]

    vector = np.zeros(space.ndof)
    for r in range(space.rows):
        vector += np.bincount(
            space.cell_dofs[:, r, :].ravel(),
            weights=cell_integrals[:, :, r].ravel(),
            minlength=space.ndof,
        )
    return TraceConstraint(vector=vector, space=space)
