"""
Polinomios bivariados en representación de coeficientes.

Un polinomio p(x, y) = Σ c[a, b] x^a y^b se guarda como arreglo 2D ``c``
(convención de ``numpy.polynomial.polynomial.polyval2d``). Un campo vectorial
es un arreglo (2, D+1, D+1).
"""

from math import factorial
from typing import List, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.signal import convolve2d


def monomial_exponents(degree: int, exact: bool = False) -> List[Tuple[int, int]]:
    """
    Exponentes (a, b) de los monomios x^a y^b.

    Args:
        degree: Grado total máximo
        exact: Si es True solo devuelve los de grado total igual a ``degree``

    Returns:
        Lista ordenada por grado total y luego por potencia de x decreciente
    """
    if degree < 0:
        return []
    degrees = [degree] if exact else range(degree + 1)
    return [(a, d - a) for d in degrees for a in range(d, -1, -1)]


def monomial(a: int, b: int, size: int) -> np.ndarray:
    """Coeficientes de x^a y^b en un arreglo (size, size)."""
    c = np.zeros((size, size))
    c[a, b] = 1.0
    return c


def monomial_integral(a: int, b: int) -> float:
    """Integral exacta de x^a y^b sobre el triángulo de referencia: a! b! / (a+b+2)!."""
    return factorial(a) * factorial(b) / factorial(a + b + 2)


def pad(c: np.ndarray, size: int) -> np.ndarray:
    """Rellena (o recorta términos nulos de) un arreglo de coeficientes a (size, size)."""
    out = np.zeros((size, size))
    n0, n1 = min(c.shape[0], size), min(c.shape[1], size)
    if np.any(c[n0:, :]) or np.any(c[:, n1:]):
        raise ValueError("El polinomio excede el tamaño solicitado")
    out[:n0, :n1] = c[:n0, :n1]
    return out


def multiply(c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
    """Producto de dos polinomios (convolución 2D de coeficientes)."""
    return convolve2d(c1, c2)


def dx(c: np.ndarray) -> np.ndarray:
    """Derivada respecto de x, mismo tamaño que la entrada."""
    return pad(P.polyder(c, axis=0), c.shape[0]) if c.shape[0] > 1 else np.zeros_like(c)


def dy(c: np.ndarray) -> np.ndarray:
    """Derivada respecto de y, mismo tamaño que la entrada."""
    return pad(P.polyder(c, axis=1), c.shape[0]) if c.shape[1] > 1 else np.zeros_like(c)


def evaluate(c: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evalúa el polinomio en puntos (n, 2)."""
    points = np.atleast_2d(points)
    return P.polyval2d(points[:, 0], points[:, 1], c)


def evaluate_many(coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """
    Evalúa un lote de polinomios.

    Args:
        coeffs: Arreglo (..., D+1, D+1)
        points: Puntos (n, 2)

    Returns:
        Valores (n, ...) en cada punto
    """
    points = np.atleast_2d(points)
    size = coeffs.shape[-1]
    powers_x = points[:, 0:1] ** np.arange(size)
    powers_y = points[:, 1:2] ** np.arange(size)
    return np.einsum("na,nb,...ab->n...", powers_x, powers_y, coeffs)


def divergence(field: np.ndarray) -> np.ndarray:
    """Divergencia de un campo vectorial polinomial (2, D+1, D+1)."""
    return dx(field[0]) + dy(field[1])


def gradient(c: np.ndarray) -> np.ndarray:
    """Gradiente de un polinomio escalar como campo (2, D+1, D+1)."""
    return np.stack([dx(c), dy(c)])


def curl(c: np.ndarray) -> np.ndarray:
    """Rotacional escalar-a-vector (∂_y ψ, -∂_x ψ)."""
    return np.stack([dy(c), -dx(c)])


BUBBLE = np.array([[0.0, 0.0, 0.0], [0.0, 1.0, -1.0], [0.0, -1.0, 0.0]])
"""Burbuja cúbica x y (1 - x - y) del triángulo de referencia."""
