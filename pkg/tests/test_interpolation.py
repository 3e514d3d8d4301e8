import numpy as np
import pytest

from src.fem.interpolation import interp_hdiv, l2_project
from src.fem.space import build_pressure_space, build_pseudostress_space, build_velocity_space
from src.mesh import disk_mesh, lshape_mesh, unit_square_mesh


def _physical_points(space):
    mesh = space.mesh
    return mesh.map_to_physical(np.arange(mesh.n_cells), space.rule.points)


def _smooth(x):
    out = np.empty((len(x), 2, 2))
    out[:, 0, 0] = np.sin(x[:, 0]) * np.cos(x[:, 1])
    out[:, 0, 1] = np.exp(0.5 * x[:, 1])
    out[:, 1, 0] = x[:, 0] * np.cos(x[:, 0] + x[:, 1])
    out[:, 1, 1] = np.cos(2 * x[:, 1])
    return out


def _l2_error(space, coeffs, field):
    points = _physical_points(space)
    exact = field(points.reshape(-1, 2)).reshape(space.evaluate(coeffs).shape)
    det = np.abs(space.mesh.jacobians()[2])
    squared = ((space.evaluate(coeffs) - exact) ** 2).sum(axis=(-2, -1))
    return np.sqrt(np.sum(det[:, None] * space.rule.weights * squared))


@pytest.mark.parametrize("family, k, degree", [("rt", 0, 0), ("rt", 1, 1), ("rt", 2, 2), ("bdm", 0, 1), ("bdm", 1, 2)])
def test_reproduces_polynomial_tensors(family, k, degree, polynomial_tensor):
    mesh = lshape_mesh(2)
    space = build_pseudostress_space(mesh, family, k)
    field = polynomial_tensor(degree)
    coeffs = interp_hdiv(field, space)
    points = _physical_points(space)
    exact = field(points.reshape(-1, 2)).reshape(mesh.n_cells, -1, 2, 2)
    np.testing.assert_allclose(space.evaluate(coeffs), exact, atol=1e-10)


@pytest.mark.parametrize("family, k", [("rt", 0), ("rt", 1), ("bdm", 0), ("bdm", 1)])
@pytest.mark.parametrize("mesh", [unit_square_mesh(2), disk_mesh(2)], ids=["square", "disk"])
def test_commuting_diagram(mesh, family, k, polynomial_tensor):
    sigma_space = build_pseudostress_space(mesh, family, k)
    velocity_space = build_velocity_space(mesh, k, rule=sigma_space.rule)
    for _ in range(20):
        field = polynomial_tensor(3)
        div_interp = sigma_space.evaluate_divergence(interp_hdiv(field, sigma_space))
        projected = velocity_space.evaluate(l2_project(field.divergence, velocity_space))
        np.testing.assert_allclose(div_interp, projected, atol=1e-9)


@pytest.mark.parametrize("family, k, expected", [("rt", 0, 1.0), ("bdm", 0, 2.0), ("rt", 1, 2.0)])
def test_interpolation_rate(family, k, expected):
    errors = []
    for N in (4, 8, 16):
        space = build_pseudostress_space(unit_square_mesh(N), family, k)
        errors.append(_l2_error(space, interp_hdiv(_smooth, space), _smooth))
    rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(rates > expected - 0.2)


def test_shared_edge_dofs_agree():
    # Cada celda produce el mismo valor para un gdl compartido: el resultado no
    # depende de qué celda escribe último
    mesh = disk_mesh(3)
    space = build_pseudostress_space(mesh, "rt", 1)
    coeffs = interp_hdiv(_smooth, space)
    points = mesh.map_to_physical(np.arange(mesh.n_cells), space.ref.functional_points)
    values = _smooth(points.reshape(-1, 2)).reshape(mesh.n_cells, -1, 2, 2)
    _, jac, det = mesh.jacobians()
    pulled = np.einsum("cij,cprj->cpri", det[:, None, None] * np.linalg.inv(jac), values)
    local = np.einsum("kpd,cprd->crk", space.ref.functional_weights, pulled)
    np.testing.assert_allclose(coeffs[space.cell_dofs], local * space.cell_signs[:, None, :], atol=1e-12)


def test_l2_project_constant_and_linear():
    mesh = disk_mesh(3)
    pressure = build_pressure_space(mesh, 0)
    coeffs = l2_project(lambda x: np.full(len(x), 3.5), pressure)
    np.testing.assert_allclose(coeffs, 3.5)

    velocity = build_velocity_space(mesh, 0)
    centroids = mesh.vertices[mesh.cells].mean(axis=1)
    coeffs = l2_project(lambda x: np.column_stack([x[:, 0], 2 * x[:, 1]]), velocity)
    np.testing.assert_allclose(coeffs[: mesh.n_cells], centroids[:, 0], atol=1e-13)
    np.testing.assert_allclose(coeffs[mesh.n_cells:], 2 * centroids[:, 1], atol=1e-13)


@pytest.mark.parametrize("k", [1, 2])
def test_l2_project_reproduces_pk(k):
    mesh = unit_square_mesh(2)
    space = build_velocity_space(mesh, k)
    field = lambda x: np.column_stack([x[:, 0] * x[:, 1] ** (k - 1), 1 - x[:, 1] ** k])
    values = space.evaluate(l2_project(field, space))
    points = _physical_points(space).reshape(-1, 2)
    np.testing.assert_allclose(values.reshape(-1, 2), field(points), atol=1e-12)


def test_wrong_space_kinds():
    mesh = unit_square_mesh(1)
    with pytest.raises(ValueError):
        interp_hdiv(_smooth, build_velocity_space(mesh, 0))
    with pytest.raises(ValueError):
        l2_project(lambda x: x, build_pseudostress_space(mesh, "rt", 0))
