"""
Bases nodales en el triángulo de referencia.

Este módulo construye:
- P_k escalar ortonormal (respecto del promedio en T̂, de modo que φ_0 = 1)
- RT_k = [P_k]^2 ⊕ P̃_k x, dual a momentos normales por arista contra
  Legendre de grado <= k y momentos interiores contra [P_{k-1}]^2
- BDM_k = [P_k]^2, dual a momentos normales contra Legendre de grado <= k y
  momentos interiores contra ∇P_{k-1} más rotacionales de burbuja curl(b P_{k-2})

Las bases H(div) se obtienen invirtiendo la matriz de funcionales sobre un
conjunto generador de monomios vectoriales.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np
from numpy.polynomial import legendre
from scipy import linalg

from ..mesh.mesh import LOCAL_EDGES
from . import polynomials as poly
from .quadrature import QuadRule, quadrature_rule, gauss_legendre

REF_VERTICES = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
DUAL_CONDITION_LIMIT = 1e12


class ElementFamily(str, Enum):
    """Familias de elementos de referencia"""
    PK = "Pk_scalar"
    RT = "RTk"
    BDM = "BDMk"


class DofMeta(NamedTuple):
    """Clase funcional de un grado de libertad local."""
    kind: str      # "edge", "interior" o "moment"
    entity: int    # arista local (o -1 en el interior)
    index: int     # orden del momento


@dataclass(frozen=True, eq=False)
class ReferenceBasis:
    """
    Base de referencia tabulada.

    Attributes:
        family: Familia del elemento
        degree: Grado k del elemento
        coefficients: Coeficientes polinomiales (dim, D, D) o (dim, 2, D, D)
        div_coefficients: Coeficientes de las divergencias (solo H(div))
        dof_meta: Clase funcional de cada función de base
        rule: Regla de cuadratura de la tabulación
        values: Valores en los puntos de la regla (nq, dim) o (nq, dim, 2)
        divergences: Divergencias en los puntos de la regla (nq, dim)
        functional_points: Puntos donde actúan los funcionales (P, 2)
        functional_weights: Pesos de los funcionales (dim, P, 2)
        dual_condition: Número de condición de la matriz de funcionales
    """

    family: ElementFamily
    degree: int
    coefficients: np.ndarray
    div_coefficients: Optional[np.ndarray]
    dof_meta: Tuple[DofMeta, ...]
    rule: QuadRule
    values: np.ndarray
    divergences: Optional[np.ndarray]
    functional_points: Optional[np.ndarray] = None
    functional_weights: Optional[np.ndarray] = None
    dual_condition: float = 1.0

    @property
    def dim(self) -> int:
        return int(self.coefficients.shape[0])

    @property
    def is_vector(self) -> bool:
        return self.family is not ElementFamily.PK

    @property
    def edge_dofs(self) -> int:
        """Grados de libertad por arista."""
        return sum(1 for m in self.dof_meta if m.kind == "edge" and m.entity == 0)

    @property
    def interior_dofs(self) -> int:
        return sum(1 for m in self.dof_meta if m.kind == "interior")

    def tabulate(self, points: np.ndarray) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """
        Evalúa la base en puntos arbitrarios de referencia.

        Args:
            points: Puntos (n, 2)

        Returns:
            Tupla (valores, divergencias); divergencias es None para P_k
        """
        values = poly.evaluate_many(self.coefficients, points)
        if self.div_coefficients is None:
            return values, None
        return values, poly.evaluate_many(self.div_coefficients, points)

    def apply_functionals(self, field: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """
        Aplica los funcionales que definen la base a un campo vectorial.

        Args:
            field: Función que recibe puntos (P, 2) y devuelve valores (P, ..., 2)

        Returns:
            Valores de los funcionales con forma (..., dim)
        """
        if self.functional_weights is None:
            raise ValueError("Los funcionales solo están definidos para familias H(div)")
        values = np.asarray(field(self.functional_points))
        return np.einsum("jpd,p...d->...j", self.functional_weights, values)

    def dual_matrix(self) -> np.ndarray:
        """Matriz D[j, i] = ℓ_j(φ_i); la identidad para una base nodal."""
        return self.apply_functionals(lambda p: self.tabulate(p)[0]).T


def _check_degree(k: int, low: int, high: int, name: str) -> int:
    if int(k) != k or not low <= k <= high:
        raise ValueError(f"Grado no soportado para {name}: k={k} (rango {low}..{high})")
    return int(k)


@lru_cache(maxsize=None)
def pk_basis(k: int, rule: QuadRule) -> ReferenceBasis:
    """
    Base ortonormal de P_k(T̂) obtenida por Gram-Schmidt (Cholesky) sobre monomios.

    La normalización es ∫_T̂ φ_i φ_j = |T̂| δ_ij, de modo que φ_0 = 1 y la
    matriz de masa de una celda física T es |T| I.

    Args:
        k: Grado polinomial (0 <= k <= 3)
        rule: Regla de cuadratura de la tabulación

    Returns:
        Base escalar tabulada
    """
    k = _check_degree(k, 0, 3, "P_k")
    exps = poly.monomial_exponents(k)
    size = k + 1
    gram = np.array([
        [2.0 * poly.monomial_integral(a1 + a2, b1 + b2) for (a2, b2) in exps]
        for (a1, b1) in exps
    ])
    chol = linalg.cholesky(gram, lower=True)
    transform = linalg.solve_triangular(chol, np.eye(len(exps)), lower=True)

    monomials = np.stack([poly.monomial(a, b, size) for a, b in exps])
    coefficients = np.einsum("im,mab->iab", transform, monomials)
    meta = tuple(DofMeta("moment", -1, i) for i in range(len(exps)))

    return ReferenceBasis(
        family=ElementFamily.PK,
        degree=k,
        coefficients=coefficients,
        div_coefficients=None,
        dof_meta=meta,
        rule=rule,
        values=poly.evaluate_many(coefficients, rule.points),
        divergences=None,
    )


def _vector_monomials(degree: int, size: int) -> list:
    fields = []
    for a, b in poly.monomial_exponents(degree):
        m = poly.monomial(a, b, size)
        zero = np.zeros_like(m)
        fields.append(np.stack([m, zero]))
        fields.append(np.stack([zero, m]))
    return fields


def _edge_functionals(order: int, n_points: int):
    """Puntos y pesos de los momentos normales contra Legendre de grado <= order."""
    s, w = gauss_legendre(n_points)
    points, weights, meta = [], [], []
    for e, (a, b) in enumerate(LOCAL_EDGES):
        A, B = REF_VERTICES[a], REF_VERTICES[b]
        tangent = B - A
        # normal exterior escalada: rot(B - A)/2 incluye el jacobiano de la arista
        normal = np.array([tangent[1], -tangent[0]]) / 2.0
        points.append(0.5 * (A + B) + np.outer(s, tangent) / 2.0)
        for j in range(order + 1):
            lj = legendre.legval(s, np.eye(order + 1)[j])
            weights.append((e, (w * lj)[:, None] * normal))
            meta.append(DofMeta("edge", e, j))
    return np.vstack(points), weights, meta


def _build_hdiv(
    family: ElementFamily,
    k: int,
    span: list,
    interior_tests: list,
    poly_degree: int,
    rule: QuadRule,
) -> ReferenceBasis:
    n_gl = poly_degree + 4
    edge_points, edge_weights, meta = _edge_functionals(k, n_gl)
    inner = quadrature_rule(min(10, 2 * poly_degree + 4))

    fpoints = np.vstack([edge_points, inner.points])
    n_edge_pts = edge_points.shape[0]
    dim = len(meta) + len(interior_tests)
    fweights = np.zeros((dim, fpoints.shape[0], 2))
    for j, (e, w) in enumerate(edge_weights):
        fweights[j, e * n_gl:(e + 1) * n_gl, :] = w
    n_edge_dofs = len(meta)
    for m, test in enumerate(interior_tests):
        values = poly.evaluate_many(test, inner.points)  # (nq, 2)
        fweights[n_edge_dofs + m, n_edge_pts:, :] = inner.weights[:, None] * values
        meta.append(DofMeta("interior", -1, m))

    span = np.stack(span)
    if span.shape[0] != dim:
        raise RuntimeError(
            f"Dimensión inconsistente en {family.value}: {span.shape[0]} generadores vs {dim} funcionales"
        )

    span_values = poly.evaluate_many(span, fpoints)  # (P, dim, 2)
    dual = np.einsum("jpd,pid->ji", fweights, span_values)
    condition = float(np.linalg.cond(dual))
    if not np.isfinite(condition) or condition > DUAL_CONDITION_LIMIT:
        raise ValueError(
            f"Matriz de funcionales singular para {family.value}, k={k} (condición {condition:.3e})"
        )

    transform = linalg.solve(dual, np.eye(dim))
    coefficients = np.einsum("mi,mcab->icab", transform, span)
    div_coefficients = np.stack([poly.divergence(c) for c in coefficients])

    fpoints.setflags(write=False)
    fweights.setflags(write=False)
    return ReferenceBasis(
        family=family,
        degree=k,
        coefficients=coefficients,
        div_coefficients=div_coefficients,
        dof_meta=tuple(meta),
        rule=rule,
        values=poly.evaluate_many(coefficients, rule.points),
        divergences=poly.evaluate_many(div_coefficients, rule.points),
        functional_points=fpoints,
        functional_weights=fweights,
        dual_condition=condition,
    )


@lru_cache(maxsize=None)
def rt_basis(k: int, rule: QuadRule) -> ReferenceBasis:
    """
    Base nodal de Raviart-Thomas RT_k(T̂), dimensión (k+1)(k+3).

    Args:
        k: Grado (0 <= k <= 2)
        rule: Regla de cuadratura de la tabulación

    Returns:
        Base vectorial tabulada con divergencias

    Raises:
        ValueError: Grado no soportado o matriz de funcionales singular
    """
    k = _check_degree(k, 0, 2, "RT_k")
    size = k + 2
    span = _vector_monomials(k, size)
    for a, b in poly.monomial_exponents(k, exact=True):
        span.append(np.stack([poly.monomial(a + 1, b, size), poly.monomial(a, b + 1, size)]))
    tests = _vector_monomials(k - 1, k + 1) if k >= 1 else []
    return _build_hdiv(ElementFamily.RT, k, span, tests, k + 1, rule)


@lru_cache(maxsize=None)
def bdm_basis(k: int, rule: QuadRule) -> ReferenceBasis:
    """
    Base nodal de Brezzi-Douglas-Marini BDM_k(T̂) = [P_k]^2, dimensión (k+1)(k+2).

    Args:
        k: Grado (1 <= k <= 3)
        rule: Regla de cuadratura de la tabulación

    Returns:
        Base vectorial tabulada con divergencias
    """
    k = _check_degree(k, 1, 3, "BDM_k")
    size = k + 1
    span = _vector_monomials(k, size)

    tests = []
    # ∇P_{k-1} sin constantes
    for a, b in poly.monomial_exponents(k - 1):
        if a + b == 0:
            continue
        tests.append(poly.gradient(poly.monomial(a, b, k + 1)))
    # complemento: rotacionales de burbuja curl(b x^a y^b), a + b <= k - 2
    for a, b in poly.monomial_exponents(k - 2):
        bubble = poly.multiply(poly.BUBBLE, poly.monomial(a, b, k - 1))
        tests.append(poly.curl(bubble))
    return _build_hdiv(ElementFamily.BDM, k, span, tests, k, rule)


def interpolate_reference(
    source: ReferenceBasis, coeffs: np.ndarray, target: ReferenceBasis
) -> np.ndarray:
    """
    Reexpresa un campo de la base ``source`` en la base ``target`` aplicando los
    funcionales de ``target``.

    Args:
        source: Base H(div) de origen
        coeffs: Coeficientes en la base de origen (dim_source,)
        target: Base H(div) de destino

    Returns:
        Coeficientes en la base de destino (dim_target,)
    """
    return target.apply_functionals(
        lambda p: np.einsum("pid,i->pd", source.tabulate(p)[0], coeffs)
    )
