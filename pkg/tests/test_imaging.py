"""Tests for the sampling indicator, noise and normalization in src.imaging."""

import numpy as np
import pytest

from src.core.errors import InvalidParameterError, NormalizationError
from src.forward import MeasurementSetup, ScattererConfig, sov_cauchy_data
from src.geometry import make_curve
from src.imaging import (
    IndicatorGrid,
    NoiseModel,
    add_noise,
    dsm_indicator,
    dsm_indicator_far,
    im_phi,
    im_phi_normal_deriv,
    indicator_at_points,
    interior_form_at_points,
    make_grid,
    noise_matrix,
    noisy_cauchy_data,
    normalize,
    reconstruction_summary,
)


@pytest.fixture
def disk_config():
    """Disk B(0, 0.5) with n=5, mu=1.5, gamma=2 at k=3pi/2."""
    return ScattererConfig(
        k=1.5 * np.pi, n=5.0, mu=1.5, gamma=2.0, curve=make_curve("circle", [0.5])
    )


@pytest.fixture
def disk_data(disk_config):
    """Exact series data on the unit circle with 64 directions."""
    return sov_cauchy_data(disk_config, MeasurementSetup(radius_omega=1.0, J=64))


def test_im_phi_values():
    """Test Im Phi = J_0(k r) / 4 and its normal derivative."""
    assert im_phi([0.0, 0.0], [0.0, 0.0], 2.0) == pytest.approx(0.25)
    assert im_phi([1.0, 0.0], [0.0, 0.0], 1.0) == pytest.approx(0.25 * 0.7651976865579666)
    assert im_phi_normal_deriv([0.0, 0.0], [0.0, 0.0], 2.0, [1.0, 0.0]) == 0.0
    value = im_phi_normal_deriv([1.0, 0.0], [0.0, 0.0], 1.0, [1.0, 0.0])
    assert value == pytest.approx(-0.25 * 0.44005058574493355)


def test_make_grid():
    """Test grid shape, corners and row-major point order."""
    grid = make_grid(5, (-1.0, 1.0, -2.0, 2.0))
    assert grid.shape == (5, 5)
    np.testing.assert_allclose(grid.points[0], [-1.0, -2.0])
    np.testing.assert_allclose(grid.points[1], [-0.5, -2.0])
    np.testing.assert_allclose(grid.points[-1], [1.0, 2.0])
    with pytest.raises(InvalidParameterError, match="Degenerate"):
        make_grid(5, (1.0, -1.0, 0.0, 1.0))


def test_normalize():
    """Test normalized values reach 1 at the peak and follow the exponent."""
    grid = make_grid(3, (0.0, 1.0, 0.0, 1.0)).with_values(np.arange(9.0))
    result = normalize(grid, rho=2)
    assert np.max(result.normalized) == pytest.approx(1.0)
    assert result.normalized[0, 2] == pytest.approx((2.0 / 8.0) ** 2)
    assert result.rho == 2.0


def test_normalize_errors():
    """Test zero indicators and non-positive exponents are refused."""
    grid = make_grid(3, (0.0, 1.0, 0.0, 1.0))
    with pytest.raises(NormalizationError):
        normalize(grid.with_values(np.zeros(9)))
    with pytest.raises(InvalidParameterError, match="positive"):
        normalize(grid.with_values(np.ones(9)), rho=0)


def test_reconstruction_summary():
    """Test peak location and the inside / outside scores."""
    grid = make_grid(21, (-1.0, 1.0, -1.0, 1.0))
    values = np.exp(-20 * np.sum((grid.points - [0.2, -0.1]) ** 2, axis=1))
    grid = normalize(grid.with_values(values), rho=4)
    summary = reconstruction_summary(grid, make_curve("circle", [0.2, -0.1, 0.3]))

    assert summary["argmax_x"] == pytest.approx(0.2)
    assert summary["argmax_y"] == pytest.approx(-0.1)
    assert summary["mass_inside"] > 0.9
    assert summary["mean_outside"] < 0.01


def test_noise_matrix_has_unit_norm():
    """Test E is scaled to unit Frobenius and spectral norm."""
    rng = np.random.default_rng(3)
    assert np.linalg.norm(noise_matrix((8, 8), rng), "fro") == pytest.approx(1.0)
    assert np.linalg.norm(noise_matrix((8, 8), rng, "spectral"), 2) == pytest.approx(1.0)


def test_add_noise_properties():
    """Test zero noise copies, seeded draws repeat and the perturbation is bounded."""
    matrix = np.arange(1, 17, dtype=complex).reshape(4, 4)
    clean = add_noise(matrix, NoiseModel(delta=0.0))
    np.testing.assert_array_equal(clean, matrix)
    assert clean is not matrix

    model = NoiseModel(delta=0.1, seed=7)
    first, second = add_noise(matrix, model), add_noise(matrix, model)
    np.testing.assert_array_equal(first, second)
    assert np.max(np.abs(first / matrix - 1)) <= 0.1


def test_noise_model_validation():
    """Test delta outside [0, 1) and unknown norms are refused."""
    with pytest.raises(InvalidParameterError, match=r"\[0, 1\)"):
        NoiseModel(delta=1.0)
    with pytest.raises(InvalidParameterError, match="norm kind"):
        NoiseModel(delta=0.1, norm_kind="max")


def test_noisy_cauchy_data_perturbs_both_blocks(disk_data):
    """Test u^s and d_r u^s receive independent draws."""
    noisy = noisy_cauchy_data(disk_data, NoiseModel(delta=0.05, seed=1))
    ratio_us = noisy.us / disk_data.us - 1
    ratio_dus = noisy.dus / disk_data.dus - 1
    assert not np.allclose(ratio_us, ratio_dus)
    assert noisy_cauchy_data(disk_data, NoiseModel(delta=0.0)) is disk_data


def test_near_form_needs_derivative_data(disk_data):
    """Test the near indicator refuses data without d_r u^s."""
    data = type(disk_data)(us=disk_data.us, dus=None, setup=disk_data.setup, k=disk_data.k)
    with pytest.raises(InvalidParameterError, match="far variant"):
        indicator_at_points(data, np.zeros((1, 2)))


def test_indicator_peaks_inside_disk(disk_data):
    """Test the indicator maximum lies in the scatterer."""
    grid = normalize(dsm_indicator(disk_data, make_grid(41, (-1.0, 1.0, -1.0, 1.0))), rho=4)
    summary = reconstruction_summary(grid, make_curve("circle", [0.5]))
    assert np.hypot(summary["argmax_x"], summary["argmax_y"]) < 0.5


def test_far_variant_close_at_large_radius():
    """Test |W_far - W| / max W <= 0.05 on a measurement circle of radius 10."""
    cfg = ScattererConfig(
        k=2 * np.pi, n=2.0, mu=0.8, gamma=1.1, curve=make_curve("circle", [0.4])
    )
    data = sov_cauchy_data(cfg, MeasurementSetup(radius_omega=10.0, J=160))
    grid = make_grid(21, (-1.0, 1.0, -1.0, 1.0))
    near = dsm_indicator(data, grid).values
    far = dsm_indicator_far(data, grid).values

    assert np.max(np.abs(far - near)) <= 0.05 * np.max(near)


def test_interior_form_agrees_with_indicator(disk_config, disk_data):
    """Test the boundary-data indicator equals the volume plus boundary form."""
    points = make_grid(9, (-1.0, 1.0, -1.0, 1.0)).points
    boundary_form = indicator_at_points(disk_data, points)
    interior_form = interior_form_at_points(disk_config, points, disk_data.setup.angles)

    scale = np.max(boundary_form)
    assert np.max(np.abs(boundary_form - interior_form)) <= 1e-4 * scale


def test_indicator_decays_like_inverse_sqrt_distance(disk_config, disk_data):
    """Test W(z) sqrt(dist) envelopes at distances 20 and 40 agree within 25%."""
    wavelength = 2 * np.pi / disk_config.k
    offsets = np.linspace(0.0, wavelength, 64)
    for angle in (0.0, 2.0, 4.0):
        e = np.array([np.cos(angle), np.sin(angle)])
        envelopes = []
        for dist in (20.0, 40.0):
            r = 0.5 + dist + offsets
            values = indicator_at_points(disk_data, r[:, None] * e[None, :])
            envelopes.append(np.max(values * np.sqrt(r - 0.5)))
        assert abs(envelopes[1] / envelopes[0] - 1) <= 0.25


def test_grid_values_reshape():
    """Test with_values keeps the (ny, nx) layout."""
    grid = IndicatorGrid(xs=np.array([0.0, 1.0, 2.0]), ys=np.array([0.0, 1.0]))
    assert grid.with_values(np.arange(6.0)).values[1, 0] == 3.0


def test_indicator_ignores_direction_phases(disk_data):
    """Test multiplying each direction column by a unit phase leaves W unchanged."""
    points = make_grid(11, (-1.0, 1.0, -1.0, 1.0)).points
    phases = np.exp(1j * np.random.default_rng(5).uniform(0, 2 * np.pi, disk_data.setup.J))
    shifted = type(disk_data)(
        us=disk_data.us * phases[None, :],
        dus=disk_data.dus * phases[None, :],
        setup=disk_data.setup,
        k=disk_data.k,
    )
    reference = indicator_at_points(disk_data, points)
    np.testing.assert_allclose(
        indicator_at_points(shifted, points), reference, atol=1e-12 * np.max(reference)
    )


def test_indicator_change_is_linear_in_noise_level(disk_data):
    """Test doubling delta with the same draws about doubles the change in W."""
    points = make_grid(21, (-1.0, 1.0, -1.0, 1.0)).points
    clean = indicator_at_points(disk_data, points)
    changes = []
    for delta in (0.01, 0.02):
        noisy = noisy_cauchy_data(disk_data, NoiseModel(delta=delta, seed=11))
        changes.append(np.max(np.abs(indicator_at_points(noisy, points) - clean)))
    assert 1.5 <= changes[1] / changes[0] <= 2.5


def test_indicator_rotates_with_centered_disk(disk_data):
    """Test W(Rz) = W(z) for the rotation R by one measurement angle."""
    points = make_grid(11, (-0.9, 0.9, -0.9, 0.9)).points
    angle = 2 * np.pi / disk_data.setup.J
    rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    reference = indicator_at_points(disk_data, points)
    rotated = indicator_at_points(disk_data, points @ rotation.T)
    np.testing.assert_allclose(rotated, reference, atol=1e-6 * np.max(reference))
