import numpy as np
import pytest
from scipy import linalg, sparse
from scipy.sparse.linalg import splu

from src.fem.assembly import (
    assemble_a0,
    assemble_a_full,
    assemble_b,
    assemble_mass_u,
    build_eig_system,
    export_coo,
    inf_sup_constant,
)
from src.fem.interpolation import interp_hdiv
from src.fem.space import build_pressure_space, build_pseudostress_space, build_velocity_space
from src.mesh import disk_mesh, lshape_mesh, unit_square_mesh


def _constant(tensor):
    tensor = np.asarray(tensor, dtype=float)
    return lambda x: np.broadcast_to(tensor, (len(x), 2, 2))


@pytest.fixture
def square_spaces():
    mesh = unit_square_mesh(2)
    sigma = build_pseudostress_space(mesh, "rt", 1)
    return (
        sigma,
        build_velocity_space(mesh, 1, rule=sigma.rule),
        build_pressure_space(mesh, 1, rule=sigma.rule),
    )


def test_a0_energy_of_constant_tensor(square_spaces):
    sigma, _, _ = square_spaces
    A0 = assemble_a0(sigma)
    x = interp_hdiv(_constant([[2.0, 0.0], [0.0, 0.0]]), sigma)
    np.testing.assert_allclose(x @ A0 @ x, 8.0, rtol=1e-12)
    identity = interp_hdiv(_constant(np.eye(2)), sigma)
    assert abs(identity @ A0 @ identity) < 1e-12


def test_a0_scales_with_viscosity(square_spaces):
    sigma, _, _ = square_spaces
    x = interp_hdiv(_constant([[1.0, 2.0], [0.0, -1.0]]), sigma)
    np.testing.assert_allclose(x @ assemble_a0(sigma, mu=0.25) @ x, 2 * (x @ assemble_a0(sigma) @ x))
    with pytest.raises(ValueError, match="mu"):
        assemble_a0(sigma, mu=0.0)


def test_a0_symmetric_positive_semidefinite(square_spaces):
    sigma, _, _ = square_spaces
    A0 = assemble_a0(sigma)
    assert abs(A0 - A0.T).max() == 0.0
    assert linalg.eigvalsh(A0.toarray()).min() > -1e-10


def test_a_full_energies(square_spaces):
    sigma, _, pressure = square_spaces
    A = assemble_a_full(sigma, pressure)
    assert A.shape == (sigma.ndof + pressure.ndof,) * 2
    assert abs(A - A.T).max() == 0.0

    z = np.zeros(A.shape[0])
    z[: sigma.ndof] = interp_hdiv(_constant(np.eye(2)), sigma)
    z[sigma.ndof:][pressure.cell_dofs[:, 0, 0]] = -1.0
    assert abs(z @ A @ z) < 1e-12

    z = np.zeros(A.shape[0])
    z[sigma.ndof:][pressure.cell_dofs[:, 0, 0]] = 1.0
    np.testing.assert_allclose(z @ A @ z, 8.0, rtol=1e-12)
    assert linalg.eigvalsh(A.toarray()).min() > -1e-10


def test_b_vanishes_on_divergence_free(square_spaces, rng):
    sigma, velocity, _ = square_spaces
    B = assemble_b(sigma, velocity)
    assert B.shape == (velocity.ndof, sigma.ndof)
    a, b, c, d = rng.standard_normal(4)
    field = lambda x: np.stack([
        np.column_stack([a * x[:, 1], b * x[:, 0]]),
        np.column_stack([c * x[:, 1], d * x[:, 0]]),
    ], axis=1)
    np.testing.assert_allclose(B @ interp_hdiv(field, sigma), 0.0, atol=1e-12)


def test_b_rt0_entries_are_orientation_signs():
    mesh = unit_square_mesh(3)
    sigma = build_pseudostress_space(mesh, "rt", 0)
    velocity = build_velocity_space(mesh, 0, rule=sigma.rule)
    B = assemble_b(sigma, velocity).toarray()
    for c in range(mesh.n_cells):
        for r in range(2):
            row = B[velocity.cell_dofs[c, r, 0]]
            np.testing.assert_allclose(row[sigma.cell_dofs[c, r]], mesh.cell_edge_signs[c], atol=1e-13)
            assert np.count_nonzero(np.abs(row) > 1e-13) == 3


@pytest.mark.parametrize("family, k", [("rt", 0), ("rt", 1), ("bdm", 0)])
@pytest.mark.parametrize("make", [lambda: unit_square_mesh(3), lambda: lshape_mesh(2)], ids=["square", "lshape"])
def test_b_full_row_rank(make, family, k):
    mesh = make()
    sigma = build_pseudostress_space(mesh, family, k)
    velocity = build_velocity_space(mesh, k, rule=sigma.rule)
    singular = linalg.svdvals(assemble_b(sigma, velocity).toarray())
    assert singular.min() > 1e-8


def test_mass_is_area_diagonal():
    mesh = disk_mesh(3)
    velocity = build_velocity_space(mesh, 1)
    M = assemble_mass_u(velocity)
    dense = M.toarray()
    np.testing.assert_allclose(dense, np.diag(np.diag(dense)), atol=1e-14)
    areas = mesh.areas()
    np.testing.assert_allclose(dense[velocity.cell_dofs[:, 0, 0], velocity.cell_dofs[:, 0, 0]], areas)
    linalg.cholesky(dense)


def test_mass_total_area():
    mesh = lshape_mesh(2)
    velocity = build_velocity_space(mesh, 0)
    M = assemble_mass_u(velocity)
    ones = np.zeros(velocity.ndof)
    ones[velocity.cell_dofs[:, 0, 0]] = 1.0
    np.testing.assert_allclose(ones @ M @ ones, 3.0)


def test_spaces_must_share_mesh():
    sigma = build_pseudostress_space(unit_square_mesh(2), "rt", 0)
    with pytest.raises(ValueError):
        assemble_b(sigma, build_velocity_space(unit_square_mesh(2), 0))


@pytest.mark.parametrize("formulation, dim", [("full", 209), ("reduced", 177)])
def test_eig_system_dimensions(formulation, dim):
    system = build_eig_system(unit_square_mesh(4), "rt", 0, formulation)
    assert system.dim == dim
    assert system.K.shape == system.C.shape == (dim, dim)
    assert abs(system.K - system.K.T).max() == 0.0
    assert list(system.block_layout)[-1] == "multiplier"
    assert system.block_layout["multiplier"] == (dim - 1, dim)


def test_eig_system_mass_block():
    mesh = unit_square_mesh(3)
    system = build_eig_system(mesh, "bdm", 0, "full")
    start, stop = system.block_layout["velocity"]
    C = system.C.toarray()
    np.testing.assert_allclose(np.diag(C)[start:stop], -np.tile(mesh.areas(), 2))
    assert np.count_nonzero(C[:start]) == 0
    assert np.count_nonzero(C[stop:]) == 0


@pytest.mark.parametrize("formulation", ["full", "reduced"])
def test_multiplier_removes_kernel(formulation):
    system = build_eig_system(unit_square_mesh(3), "rt", 0, formulation)
    z = np.zeros(system.dim)
    start, stop = system.block_layout["sigma"]
    z[start:stop] = interp_hdiv(_constant(np.eye(2)), system.sigma_space)
    if formulation == "full":
        p0, _ = system.block_layout["pressure"]
        z[p0 + system.pressure_space.cell_dofs[:, 0, 0]] = -1.0
    K0 = system.K[:-1, :-1]
    np.testing.assert_allclose(K0 @ z[:-1], 0.0, atol=1e-12)
    # con el multiplicador K es no singular
    splu(sparse.csc_matrix(system.K))


def test_block_extraction():
    system = build_eig_system(unit_square_mesh(2), "rt", 0, "reduced")
    z = np.arange(system.dim, dtype=float)
    assert system.block("velocity", z).size == system.velocity_space.ndof
    assert system.block("sigma", np.column_stack([z, z])).shape == (system.sigma_space.ndof, 2)


@pytest.mark.parametrize("family", ["rt", "bdm"])
def test_inf_sup_stays_bounded(family):
    betas = []
    for N in (2, 4, 8):
        mesh = unit_square_mesh(N)
        sigma = build_pseudostress_space(mesh, family, 0)
        betas.append(inf_sup_constant(sigma, build_velocity_space(mesh, 0, rule=sigma.rule)))
    assert min(betas) > 0.1
    for coarse, fine in zip(betas, betas[1:]):
        assert fine >= 0.8 * coarse


def test_export_coo(tmp_path):
    matrix = sparse.csr_matrix(np.array([[0.0, 2.5], [1.0, 0.0]]))
    path = export_coo(matrix, tmp_path / "m.txt")
    assert path.read_text().splitlines() == ["0 1 2.5", "1 0 1"]
