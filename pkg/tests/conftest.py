"""
Fixtures compartidas de las pruebas.
"""

from collections import defaultdict

import numpy as np
import pytest

from src.config.settings import RuntimeConfig, SolverConfig, reset_settings
from src.fem import polynomials as poly
from src.mesh import disk_mesh, lshape_mesh, unit_square_mesh


@pytest.fixture(autouse=True)
def _fresh_settings():
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def solver_config():
    return SolverConfig()


@pytest.fixture
def runtime_config():
    return RuntimeConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["square", "lshape", "disk"])
def small_mesh(request):
    return {
        "square": lambda: unit_square_mesh(3),
        "lshape": lambda: lshape_mesh(2),
        "disk": lambda: disk_mesh(2),
    }[request.param]()


def edge_neighbors(mesh):
    """Para cada arista interior: (celda, arista local) de sus dos celdas."""
    owners = defaultdict(list)
    for c in range(mesh.n_cells):
        for local in range(3):
            owners[int(mesh.cell_edges[c, local])].append((c, local))
    return {e: cells for e, cells in owners.items() if len(cells) == 2}


class PolynomialTensor:
    """Campo tensorial polinomial aleatorio con divergencia por filas exacta."""

    def __init__(self, rng, degree):
        size = degree + 1
        self.coeffs = np.zeros((2, 2, size, size))
        for a, b in poly.monomial_exponents(degree):
            self.coeffs[:, :, a, b] = rng.standard_normal((2, 2))

    def __call__(self, points):
        return poly.evaluate_many(self.coeffs, points)

    def divergence(self, points):
        div = np.stack([poly.divergence(self.coeffs[r]) for r in range(2)])
        return poly.evaluate_many(div, points)


@pytest.fixture
def polynomial_tensor(rng):
    return lambda degree: PolynomialTensor(rng, degree)
