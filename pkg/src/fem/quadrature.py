"""
Reglas de cuadratura sobre el triángulo de referencia T̂ = conv{(0,0), (1,0), (0,1)}
y sobre el intervalo [-1, 1].
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss

MAX_DEGREE = 10


@dataclass(frozen=True, eq=False)
class QuadRule:
    """
    Regla de cuadratura en T̂.

    Attributes:
        points: Puntos de referencia (nq, 2)
        weights: Pesos positivos (nq,) que suman 1/2
        degree: Grado de exactitud polinomial
    """

    points: np.ndarray
    weights: np.ndarray
    degree: int

    @property
    def size(self) -> int:
        return int(self.weights.size)


def _collapsed_gauss(degree: int):
    """Producto de Gauss-Legendre colapsado (Duffy): x = s, y = t (1 - s)."""
    n = (degree + 3) // 2
    xi, wi = leggauss(n)
    s = 0.5 * (xi + 1.0)
    ws = 0.5 * wi
    S, T = np.meshgrid(s, s, indexing="ij")
    W = np.outer(ws, ws) * (1.0 - S)
    points = np.column_stack([S.ravel(), (T * (1.0 - S)).ravel()])
    return points, W.ravel()


@lru_cache(maxsize=None)
def quadrature_rule(degree: int) -> QuadRule:
    """
    Regla de cuadratura exacta hasta el grado indicado.

    - grados 0 y 1: centroide, peso 1/2
    - grado 2: puntos medios de las aristas, pesos 1/6
    - grados 3..10: producto de Gauss colapsado

    Args:
        degree: Grado de exactitud (0 <= degree <= 10)

    Returns:
        Regla de cuadratura determinista

    Raises:
        ValueError: Si el grado está fuera de la tabla soportada
    """
    if int(degree) != degree or not 0 <= degree <= MAX_DEGREE:
        raise ValueError(f"Grado de cuadratura fuera de rango [0, {MAX_DEGREE}]: {degree}")
    degree = int(degree)

    if degree <= 1:
        points = np.array([[1.0 / 3.0, 1.0 / 3.0]])
        weights = np.array([0.5])
    elif degree == 2:
        points = np.array([[0.5, 0.0], [0.5, 0.5], [0.0, 0.5]])
        weights = np.full(3, 1.0 / 6.0)
    else:
        points, weights = _collapsed_gauss(degree)

    points.setflags(write=False)
    weights.setflags(write=False)
    return QuadRule(points=points, weights=weights, degree=degree)


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """
    Regla de Gauss-Legendre de n puntos en [-1, 1] (exacta hasta grado 2n-1).

    Returns:
        Tupla (puntos, pesos) de solo lectura
    """
    points, weights = leggauss(int(n))
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights
