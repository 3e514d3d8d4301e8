"""
Transformación contravariante de Piola para bases H(div).

v(x) = (1/det J) J v̂(x̂),  div v(x) = div v̂(x̂) / det J,  x = F(x̂) = v0 + J x̂
"""

from typing import Optional, Tuple

import numpy as np

from .reference import ReferenceBasis

DEGENERACY_TOL = 1e-14


def _affine_map(vertices: np.ndarray) -> Tuple[np.ndarray, float]:
    vertices = np.asarray(vertices, dtype=float)
    if vertices.shape != (3, 2):
        raise ValueError(f"Se esperaban 3 vértices 2D, forma recibida {vertices.shape}")
    jac = np.column_stack([vertices[1] - vertices[0], vertices[2] - vertices[0]])
    det = float(np.linalg.det(jac))
    scale = max(np.abs(jac).max(), 1.0) ** 2
    if abs(det) <= DEGENERACY_TOL * scale:
        raise ValueError(f"Celda degenerada: |det J| = {abs(det):.3e}")
    return jac, det


def piola_push(
    vertices: np.ndarray,
    ref: ReferenceBasis,
    points: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lleva una base de referencia H(div) a la celda física de vértices dados.

    Args:
        vertices: Coordenadas (3, 2) de la celda
        ref: Base RT_k o BDM_k de referencia
        points: Puntos de referencia opcionales (por defecto, los de la regla de ``ref``)

    Returns:
        Tupla (valores (np, dim, 2), divergencias (np, dim)) en los puntos imagen

    Raises:
        ValueError: Si la celda es degenerada o la base no es vectorial
    """
    if not ref.is_vector:
        raise ValueError("La transformación de Piola requiere una base H(div)")
    jac, det = _affine_map(vertices)
    if points is None:
        values, divs = ref.values, ref.divergences
    else:
        values, divs = ref.tabulate(points)
    return np.einsum("ij,pkj->pki", jac, values) / det, divs / det


def piola_batch(
    jac: np.ndarray, det: np.ndarray, values: np.ndarray, divs: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Versión vectorizada sobre celdas.

    Args:
        jac: Jacobianos (nc, 2, 2)
        det: Determinantes (nc,)
        values: Valores de referencia (np, dim, 2)
        divs: Divergencias de referencia (np, dim)

    Returns:
        Tupla (valores (nc, np, dim, 2), divergencias (nc, np, dim))
    """
    phys = np.einsum("cij,pkj->cpki", jac, values) / det[:, None, None, None]
    return phys, divs[None, :, :] / det[:, None, None]
