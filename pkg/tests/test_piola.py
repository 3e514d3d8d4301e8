import numpy as np
import pytest

from src.fem.piola import piola_batch, piola_push
from src.fem.quadrature import gauss_legendre, quadrature_rule
from src.fem.reference import REF_VERTICES, bdm_basis, pk_basis, rt_basis
from src.mesh import LOCAL_EDGES

RULE = quadrature_rule(6)


def _edge_flux(values_on_edge, A, B, weights):
    t = B - A
    normal = np.array([t[1], -t[0]]) / 2.0
    return np.einsum("p,pkd,d->k", weights, values_on_edge, normal)


def test_identity_map():
    ref = rt_basis(1, RULE)
    values, divs = piola_push(REF_VERTICES, ref)
    np.testing.assert_allclose(values, ref.values)
    np.testing.assert_allclose(divs, ref.divergences)


def test_scaling():
    ref = bdm_basis(2, RULE)
    values, divs = piola_push(2.0 * REF_VERTICES, ref)
    np.testing.assert_allclose(values, ref.values / 2.0)
    np.testing.assert_allclose(divs, ref.divergences / 4.0)


@pytest.mark.parametrize("make", [lambda: rt_basis(0, RULE), lambda: rt_basis(2, RULE), lambda: bdm_basis(2, RULE)])
def test_normal_flux_preserved(make, rng):
    ref = make()
    s, w = gauss_legendre(6)
    for _ in range(100):
        vertices = rng.uniform(-3, 3, size=(3, 2))
        jac = np.column_stack([vertices[1] - vertices[0], vertices[2] - vertices[0]])
        if abs(np.linalg.det(jac)) < 0.1:
            continue
        if np.linalg.det(jac) < 0:
            vertices = vertices[[0, 2, 1]]
        for a, b in LOCAL_EDGES:
            A, B = REF_VERTICES[a], REF_VERTICES[b]
            ref_points = 0.5 * (A + B) + np.outer(s, B - A) / 2.0
            physical, _ = piola_push(vertices, ref, points=ref_points)
            expected = _edge_flux(ref.tabulate(ref_points)[0], A, B, w)
            got = _edge_flux(physical, vertices[a], vertices[b], w)
            np.testing.assert_allclose(got, expected, atol=1e-11)


def test_batch_matches_single_cell(rng):
    ref = rt_basis(1, RULE)
    cells = [np.array([[0.0, 0.0], [2.0, 0.5], [0.3, 1.0]]), np.array([[1.0, 1.0], [0.0, 2.0], [-1.0, 0.0]])]
    jac = np.stack([np.column_stack([c[1] - c[0], c[2] - c[0]]) for c in cells])
    det = np.linalg.det(jac)
    values, divs = piola_batch(jac, det, ref.values, ref.divergences)
    for i, vertices in enumerate(cells):
        single_values, single_divs = piola_push(vertices, ref)
        np.testing.assert_allclose(values[i], single_values)
        np.testing.assert_allclose(divs[i], single_divs)


def test_rejects_degenerate_cell():
    with pytest.raises(ValueError):
        piola_push(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]), rt_basis(0, RULE))


def test_rejects_scalar_basis():
    with pytest.raises(ValueError):
        piola_push(REF_VERTICES, pk_basis(0, RULE))
