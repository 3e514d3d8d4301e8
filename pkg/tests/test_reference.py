import numpy as np
import pytest

from src.fem.quadrature import quadrature_rule
from src.fem.reference import (
    ElementFamily,
    bdm_basis,
    interpolate_reference,
    pk_basis,
    rt_basis,
)

RULE = quadrature_rule(8)


def _random_points(rng, n=25):
    pts = rng.random((n, 2))
    flip = pts.sum(axis=1) > 1
    pts[flip] = 1 - pts[flip]
    return pts


@pytest.mark.parametrize("k", range(0, 4))
def test_pk_orthonormal_in_mean(k):
    basis = pk_basis(k, RULE)
    assert basis.dim == (k + 1) * (k + 2) // 2
    gram = np.einsum("q,qi,qj->ij", RULE.weights, basis.values, basis.values)
    np.testing.assert_allclose(gram, 0.5 * np.eye(basis.dim), atol=1e-13)
    np.testing.assert_allclose(basis.values[:, 0], 1.0)
    assert not basis.is_vector


@pytest.mark.parametrize("k", range(0, 3))
def test_rt_dimension_and_duality(k):
    basis = rt_basis(k, RULE)
    assert basis.family is ElementFamily.RT
    assert basis.dim == (k + 1) * (k + 3)
    assert basis.edge_dofs == k + 1
    assert basis.interior_dofs == k * (k + 1)
    np.testing.assert_allclose(basis.dual_matrix(), np.eye(basis.dim), atol=1e-11)


@pytest.mark.parametrize("k", range(1, 4))
def test_bdm_dimension_and_duality(k):
    basis = bdm_basis(k, RULE)
    assert basis.dim == (k + 1) * (k + 2)
    assert basis.edge_dofs == k + 1
    assert basis.interior_dofs == (k - 1) * (k + 1)
    np.testing.assert_allclose(basis.dual_matrix(), np.eye(basis.dim), atol=1e-11)


@pytest.mark.parametrize("builder, k", [(rt_basis, 1), (rt_basis, 2), (bdm_basis, 2), (bdm_basis, 3)])
def test_interior_moments_follow_edge_moments(builder, k):
    basis = builder(k, RULE)
    n_edge = 3 * basis.edge_dofs
    assert [m.kind for m in basis.dof_meta] == ["edge"] * n_edge + ["interior"] * basis.interior_dofs
    assert basis.functional_weights.shape[0] == basis.dim
    interior_rows = basis.functional_weights[n_edge:]
    assert np.all(np.abs(interior_rows).reshape(basis.interior_dofs, -1).max(axis=1) > 0)
    np.testing.assert_allclose(basis.dual_matrix(), np.eye(basis.dim), atol=1e-11)


def test_rt0_unit_flux_and_constant_divergence():
    basis = rt_basis(0, RULE)
    # Flujo total 1 sobre su arista y área 1/2: div = 2
    np.testing.assert_allclose(basis.divergences, 2.0, atol=1e-12)


@pytest.mark.parametrize("k", range(0, 3))
def test_divergence_tabulation_matches_values(k, rng):
    basis = rt_basis(k, RULE)
    pts = _random_points(rng, 5)
    eps = 1e-6
    dx = (basis.tabulate(pts + [eps, 0])[0][..., 0] - basis.tabulate(pts - [eps, 0])[0][..., 0]) / (2 * eps)
    dy = (basis.tabulate(pts + [0, eps])[0][..., 1] - basis.tabulate(pts - [0, eps])[0][..., 1]) / (2 * eps)
    np.testing.assert_allclose(basis.tabulate(pts)[1], dx + dy, atol=1e-6)


@pytest.mark.parametrize("k", range(0, 3))
def test_rt_inside_bdm_next(k, rng):
    rt = rt_basis(k, RULE)
    bdm = bdm_basis(k + 1, RULE)
    coeffs = rng.standard_normal(rt.dim)
    lifted = interpolate_reference(rt, coeffs, bdm)
    pts = _random_points(rng)
    field_rt = np.einsum("pid,i->pd", rt.tabulate(pts)[0], coeffs)
    field_bdm = np.einsum("pid,i->pd", bdm.tabulate(pts)[0], lifted)
    np.testing.assert_allclose(field_bdm, field_rt, atol=1e-10)
    np.testing.assert_allclose(interpolate_reference(bdm, lifted, rt), coeffs, atol=1e-10)


@pytest.mark.parametrize("k", range(1, 3))
def test_bdm_inside_rt(k, rng):
    bdm = bdm_basis(k, RULE)
    rt = rt_basis(k, RULE)
    coeffs = rng.standard_normal(bdm.dim)
    moved = interpolate_reference(bdm, coeffs, rt)
    pts = _random_points(rng)
    np.testing.assert_allclose(
        np.einsum("pid,i->pd", rt.tabulate(pts)[0], moved),
        np.einsum("pid,i->pd", bdm.tabulate(pts)[0], coeffs),
        atol=1e-10,
    )


@pytest.mark.parametrize("builder, k", [(rt_basis, 3), (rt_basis, -1), (bdm_basis, 0), (bdm_basis, 4), (pk_basis, 4)])
def test_rejects_unsupported_degree(builder, k):
    with pytest.raises(ValueError):
        builder(k, RULE)


def test_functionals_only_for_hdiv():
    with pytest.raises(ValueError):
        pk_basis(1, RULE).apply_functionals(lambda p: p)
