"""Tests for the boundary-integral solver in src.forward.bie."""

import numpy as np
import pytest

from src.core.errors import (
    InvalidDiscretizationError,
    InvalidParameterError,
    UnsupportedDomainError,
)
from src.forward import (
    BoundaryIntegralModel,
    MeasurementSetup,
    ScattererConfig,
    assemble_normal_derivative,
    assemble_operators,
    assemble_single_layer,
    bie_cauchy_data,
    bie_farfield_matrix,
    block_matrix,
    farfield_error,
    fd_step,
    scattered_field,
    solve_bie,
    sov_cauchy_data,
    sov_farfield,
    tangential_second_derivative,
)
from src.forward.bie import collocation_nodes
from src.geometry import curve_frame, make_curve
from src.specfun import bessel_j, bessel_j_deriv, hankel1, hankel1_deriv


@pytest.fixture
def unit_circle():
    return make_curve("circle", [1.0])


def _fourier_mode(p, n_nodes):
    return np.exp(1j * p * collocation_nodes(n_nodes))


def test_single_layer_circle_eigenvalues(unit_circle):
    """Test S e^{ipt} = (i pi R / 2) J_p(kR) H_p(kR) e^{ipt} on the unit circle."""
    k, N = 2.0, 64
    S = assemble_single_layer(unit_circle, k, N)
    for p in range(6):
        mode = _fourier_mode(p, N)
        expected = 0.5j * np.pi * bessel_j(p, k) * hankel1(p, k)
        np.testing.assert_allclose(S @ mode, expected * mode, atol=1e-10)


def test_adjoint_double_layer_circle_eigenvalues(unit_circle):
    """Test D^T e^{ipt} = (i pi k R / 4)(J_p H_p' + J_p' H_p) e^{ipt}."""
    k, N = 2.0, 64
    D = assemble_normal_derivative(unit_circle, k, N)
    for p in range(6):
        mode = _fourier_mode(p, N)
        expected = 0.25j * np.pi * k * (
            bessel_j(p, k) * hankel1_deriv(p, k) + bessel_j_deriv(p, k) * hankel1(p, k)
        )
        np.testing.assert_allclose(D @ mode, expected * mode, atol=1e-10)


def test_tangential_derivative_on_circle(unit_circle):
    """Test d^2/ds^2 S e^{ipt} = -p^2 S e^{ipt} up to the difference error."""
    k, N = 2.0, 64
    S = assemble_single_layer(unit_circle, k, N)
    T = tangential_second_derivative(unit_circle, k, N, h=1e-2)
    for p in (1, 3):
        mode = _fourier_mode(p, N)
        np.testing.assert_allclose(T @ mode, -(p**2) * (S @ mode), rtol=1e-3, atol=1e-6)


def test_odd_node_count_rejected():
    """Test N_c must be even."""
    cfg = ScattererConfig(k=2.0, n=4.0, mu=1.0, gamma=1.0, curve=make_curve("circle", [1.0]))
    with pytest.raises(InvalidDiscretizationError, match="even"):
        solve_bie(cfg, N_f=21)


def test_zero_wavenumber_rejected(unit_circle):
    """Test the Laplace kernel is refused."""
    with pytest.raises(UnsupportedDomainError, match="Laplace"):
        assemble_single_layer(unit_circle, 0.0, 16)


def test_nonpositive_step_rejected(unit_circle):
    """Test h must be positive."""
    with pytest.raises(InvalidParameterError, match="positive"):
        tangential_second_derivative(unit_circle, 2.0, 16, h=0.0)


def test_default_step_follows_node_spacing():
    """Test the default step is 0.01 at 40 faces and halves when the faces double."""
    assert fd_step(40) == pytest.approx(0.01)
    assert fd_step(80) == pytest.approx(0.005)
    assert fd_step(10) == pytest.approx(0.04)
    assert fd_step(80, h=0.01) == 0.01
    cfg = ScattererConfig(k=2.0, n=4.0, mu=1.0, gamma=1.0, curve=make_curve("circle", [1.0]))
    assert BoundaryIntegralModel(cfg, N_f=20).h == pytest.approx(0.02)


def test_tangential_difference_error_is_second_order(unit_circle):
    """Test halving h from 0.02 to 0.01 cuts the symbol error by about four."""
    k, N, p = 2.0, 64, 3
    mode = _fourier_mode(p, N)
    S = assemble_single_layer(unit_circle, k, N)
    errors = []
    for h in (0.02, 0.01):
        T = tangential_second_derivative(unit_circle, k, N, h=h, base=S)
        errors.append(np.max(np.abs(T @ mode + p**2 * (S @ mode))))
    assert 3.0 <= errors[0] / errors[1] <= 5.0


def test_no_contrast_null_field():
    """Test n=1, mu=gamma=0 gives a scattered field below 1e-8."""
    cfg = ScattererConfig(
        k=1.5 * np.pi, n=1.0, mu=0.0, gamma=0.0, curve=make_curve("circle", [0.5])
    )
    data = bie_cauchy_data(cfg, MeasurementSetup(radius_omega=1.0, J=32), N_f=20)
    assert np.max(np.abs(data.us)) <= 1e-8


def test_cauchy_data_agrees_with_series():
    """Test the disk data of both solvers agree."""
    cfg = ScattererConfig(
        k=1.5 * np.pi, n=5.0, mu=1.5, gamma=2.0, curve=make_curve("circle", [0.5])
    )
    setup = MeasurementSetup(radius_omega=1.0, J=16)
    bie = bie_cauchy_data(cfg, setup, N_f=40)
    sov = sov_cauchy_data(cfg, setup)

    scale = np.max(np.abs(sov.us))
    assert np.max(np.abs(bie.us - sov.us)) <= 1e-2 * scale
    assert np.max(np.abs(bie.dus - sov.dus)) <= 1e-2 * np.max(np.abs(sov.dus))


def test_model_wraps_solver():
    """Test the model picks up N_f and returns J x J data."""
    cfg = ScattererConfig(k=2.0, n=4.0, mu=1.0, gamma=1.0, curve=make_curve("ellipse", [1, 0.9]))
    model = BoundaryIntegralModel(cfg, N_f=20)
    assert model.farfield(8).shape == (8, 8)


@pytest.mark.slow
def test_farfield_convergence_k2():
    """Test far-field errors decrease strictly with N_f and meet the N_f = 40, 80 bounds."""
    cfg = ScattererConfig(k=2.0, n=4.0, mu=1.0, gamma=1.0, curve=make_curve("circle", [2.0]))
    F_ref = sov_farfield(cfg, 64)
    errors = [farfield_error(F_ref, bie_farfield_matrix(cfg, 64, N_f)) for N_f in (10, 20, 40, 80)]

    assert errors[0] > errors[1] > errors[2] > errors[3]
    assert errors[2] <= 0.015
    assert errors[3] <= 0.005


@pytest.fixture
def ellipse_config():
    """Ellipse (1, 0.8) with n=4, mu=1, gamma=1 at k=2."""
    return ScattererConfig(k=2.0, n=4.0, mu=1.0, gamma=1.0, curve=make_curve("ellipse", [1, 0.8]))


def test_block_residual_is_relative_to_rhs(ellipse_config):
    """Test ||M z - rhs|| / ||rhs|| stays below 1e-10 for several directions."""
    angles = np.array([0.0, 1.0, 2.5])
    directions = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    densities = solve_bie(ellipse_config, N_f=20, directions=directions)
    assert densities.residual <= 1e-10

    ops = assemble_operators(ellipse_config.curve, 2.0, 4.0, 60, h=fd_step(20))
    M = block_matrix(ops, 1.0, 1.0)
    frame = curve_frame(ellipse_config.curve, densities.nodes)
    incident = np.exp(2j * frame["point"] @ directions.T)
    rhs = np.vstack([-incident, -2j * (frame["normal_unit"] @ directions.T) * incident])
    z = np.vstack([densities.phi, densities.psi])
    assert np.linalg.norm(M @ z - rhs) <= 1e-10 * np.linalg.norm(rhs)


def test_reflected_wavenumber_conjugates_densities(ellipse_config):
    """Test the system at -conj(k) with conjugated data gives conjugated densities."""
    curve, n_nodes, h = ellipse_config.curve, 60, fd_step(20)
    frame = curve_frame(curve, np.linspace(0, 2 * np.pi, n_nodes, endpoint=False))
    d = np.array([0.6, 0.8])
    solutions = []
    for tau in (2.0 + 0.1j, -2.0 + 0.1j):
        M = block_matrix(assemble_operators(curve, tau, 2 * tau, n_nodes, h=h), 1.0, 1.0)
        incident = np.exp(1j * tau * frame["point"] @ d)
        d_incident = 1j * tau * (frame["normal_unit"] @ d) * incident
        rhs = np.concatenate([-incident, -d_incident])
        solutions.append((M, np.linalg.solve(M, rhs)))

    (M, z), (M_reflected, z_reflected) = solutions
    np.testing.assert_allclose(M_reflected, np.conj(M), atol=1e-9 * np.max(np.abs(M)))
    np.testing.assert_allclose(z_reflected, np.conj(z), atol=1e-7 * np.max(np.abs(z)))


def test_scattered_field_solves_helmholtz(ellipse_config):
    """Test the five-point residual (Delta + k^2) u^s is below 1e-4 |u^s| off the boundary."""
    densities = solve_bie(ellipse_config, N_f=20)
    step = 1e-3
    offsets = step * np.array([[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]])
    centers = np.array([[1.5, 0.3], [-0.4, 1.4], [0.2, -1.6]])
    u = scattered_field(densities, (centers[:, None, :] + offsets).reshape(-1, 2))[:, 0]
    u = u.reshape(len(centers), len(offsets))
    laplacian = (u[:, 1:].sum(axis=1) - 4 * u[:, 0]) / step**2
    assert np.max(np.abs(laplacian + 4.0 * u[:, 0])) <= 1e-4 * np.max(np.abs(u[:, 0]))


def test_transmission_trace_continuous_between_nodes(ellipse_config):
    """Test u^i + S_k phi and S_kn psi agree at boundary points halfway between nodes."""
    densities = solve_bie(ellipse_config, N_f=40)
    n_nodes = len(densities.nodes)
    shift = np.pi / n_nodes
    frame = curve_frame(ellipse_config.curve, densities.nodes + shift)
    incident = np.exp(2j * frame["point"] @ densities.directions.T)
    S_outer = assemble_single_layer(ellipse_config.curve, 2.0, n_nodes, shift)
    S_inner = assemble_single_layer(ellipse_config.curve, 4.0, n_nodes, shift)
    outside = incident + S_outer @ densities.phi
    inside = S_inner @ densities.psi
    assert np.max(np.abs(outside - inside)) <= 1e-3
