"""
Operadores de interpolación.

- ``interp_hdiv``: interpolante tensorial por filas (Π_h^RT / Π_h^BDM) aplicando
  los funcionales del elemento a la preimagen de Piola del campo
- ``l2_project``: proyección L² elemento a elemento sobre P_k (R_h)
"""

from typing import Callable

import numpy as np

from .quadrature import quadrature_rule
from .space import FeSpace, SpaceKind

Field = Callable[[np.ndarray], np.ndarray]


def interp_hdiv(field: Field, space: FeSpace) -> np.ndarray:
    """
    Interpola un campo tensorial suave en el espacio de pseudoesfuerzos.

    La preimagen de Piola por celda es v̂ = det J · J⁻¹ v∘F; los momentos por
    arista son invariantes, así que las dos celdas vecinas producen el mismo
    valor para el grado de libertad compartido.

    Args:
        field: Función que recibe puntos (n, 2) y devuelve tensores (n, 2, 2)
            con índice [fila, componente]
        space: Espacio de pseudoesfuerzos destino

    Returns:
        Vector global de coeficientes (ndof,)
    """
    if space.kind is not SpaceKind.PSEUDOSTRESS:
        raise ValueError("interp_hdiv requiere el espacio de pseudoesfuerzos")
    ref = space.ref
    mesh = space.mesh
    nc = mesh.n_cells
    points = mesh.map_to_physical(np.arange(nc), ref.functional_points)
    values = np.asarray(field(points.reshape(-1, 2)), dtype=float)
    values = values.reshape(nc, points.shape[1], 2, 2)

    _, jac, det = mesh.jacobians()
    adjugate = det[:, None, None] * np.linalg.inv(jac)
    pulled = np.einsum("cij,cprj->cpri", adjugate, values)
    local = np.einsum("kpd,cprd->crk", ref.functional_weights, pulled)

    coeffs = np.zeros(space.ndof)
    coeffs[space.cell_dofs] = local * space.cell_signs[:, None, :]
    return coeffs


def l2_project(field: Field, space: FeSpace) -> np.ndarray:
    """
    Proyección L² elemento a elemento sobre un espacio discontinuo.

    Con la base ortonormal respecto del promedio, el coeficiente i en la celda T
    es (1/|T|) ∫_T f φ_i.

    Args:
        field: Función de puntos (n, 2) a valores (n,) (presión) o (n, 2) (velocidad)
        space: Espacio de velocidad o presión

    Returns:
        Vector global de coeficientes (ndof,)
    """
    if space.kind is SpaceKind.PSEUDOSTRESS:
        raise ValueError("l2_project requiere un espacio discontinuo")
    mesh = space.mesh
    nc = mesh.n_cells
    rule = quadrature_rule(min(10, 2 * space.degree + 6))
    basis, _ = space.ref.tabulate(rule.points)  # (nq, dim)

    points = mesh.map_to_physical(np.arange(nc), rule.points)
    values = np.asarray(field(points.reshape(-1, 2)), dtype=float)
    values = values.reshape(nc, rule.size, space.rows)

    # det J = 2 |T| en celdas orientadas positivamente
    local = 2.0 * np.einsum("q,qk,cqr->crk", rule.weights, basis, values)
    coeffs = np.zeros(space.ndof)
    coeffs[space.cell_dofs] = local
    return coeffs
