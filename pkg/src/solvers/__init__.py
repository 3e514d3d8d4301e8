"""
Solucionadores de autovalores generalizados.
"""

from .eigsolve import (
    Spectrum,
    SingularSaddlePointError,
    filter_spectrum,
    solve_generalized,
    solve_pencil,
)

__all__ = [
    "Spectrum",
    "SingularSaddlePointError",
    "filter_spectrum",
    "solve_generalized",
    "solve_pencil",
]
