"""
Ajuste por mínimos cuadrados de λ(h) = λ_extr + C h^t.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

ORDER_BOUNDS = (0.25, 10.0)
SCAN_POINTS = 400
ORDER_XATOL = 1e-9


@dataclass(frozen=True)
class FitResult:
    """Resultado del ajuste: orden t, límite λ_extr, constante C y residuo."""

    order: float
    extrapolated: float
    constant: float
    residual: float

    def to_dict(self) -> dict:
        return {
            "order": None if np.isinf(self.order) else float(self.order),
            "extrapolated": float(self.extrapolated),
            "constant": float(self.constant),
            "residual": float(self.residual),
        }


def _linear_fit(h: np.ndarray, lam: np.ndarray, t: float) -> Tuple[float, float, float]:
    design = np.column_stack([np.ones_like(h), h ** t])
    coef, *_ = np.linalg.lstsq(design, lam, rcond=None)
    residual = float(np.sum((design @ coef - lam) ** 2))
    return float(coef[0]), float(coef[1]), residual


def fit_order(levels: Iterable[Tuple[float, float]]) -> FitResult:
    """
    Ajusta (t, λ_extr, C) minimizando Σ (λ_h - λ_extr - C h^t)².

    Para t fijo el problema en (λ_extr, C) es lineal; t se busca con un barrido
    grueso en [0.25, 10] seguido de una minimización acotada.

    Args:
        levels: Pares (h, λ_h) con al menos 3 valores de h distintos

    Returns:
        Resultado del ajuste; si todos los λ_h coinciden, t = inf y λ_extr = λ_h

    Raises:
        ValueError: Menos de 3 niveles o valores de h repetidos
    """
    data = np.asarray(list(levels), dtype=float)
    if data.ndim != 2 or data.shape[0] < 3 or data.shape[1] != 2:
        raise ValueError("fit_order requiere al menos 3 niveles (h, λ)")
    h, lam = data[:, 0], data[:, 1]
    if np.unique(h).size != h.size or np.any(h <= 0):
        raise ValueError("Los valores de h deben ser positivos y distintos")

    if np.ptp(lam) <= 1e-14 * max(np.abs(lam).max(), 1.0):
        return FitResult(order=float("inf"), extrapolated=float(lam[0]), constant=0.0, residual=0.0)

    grid = np.linspace(*ORDER_BOUNDS, SCAN_POINTS)
    scores = np.array([_linear_fit(h, lam, t)[2] for t in grid])
    best = int(np.argmin(scores))
    lower = grid[max(best - 1, 0)]
    upper = grid[min(best + 1, grid.size - 1)]

    result = minimize_scalar(
        lambda t: _linear_fit(h, lam, t)[2],
        bounds=(lower, upper),
        method="bounded",
        options={"xatol": ORDER_XATOL},
    )
    t = float(result.x) if result.fun <= scores[best] else float(grid[best])
    extrapolated, constant, residual = _linear_fit(h, lam, t)
    return FitResult(order=t, extrapolated=extrapolated, constant=constant, residual=residual)


def relative_errors(values: Sequence[float], extrapolated: float) -> np.ndarray:
    """e_λ = |λ_h - λ_extr| / |λ_extr| por nivel."""
    values = np.asarray(values, dtype=float)
    return np.abs(values - extrapolated) / abs(extrapolated)
