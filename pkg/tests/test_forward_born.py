"""Tests for the small-region approximation in src.forward.born."""

import numpy as np
import pytest

from src.core.errors import InvalidGeometryError, SingularArgumentError
from src.forward import (
    BornModel,
    MeasurementSetup,
    ScattererConfig,
    SmallRegionSet,
    born_cauchy_data,
    green2d,
    lb_plane_wave,
    sov_cauchy_data,
)
from src.forward.born import disk_volume_rule
from src.geometry import make_curve


@pytest.fixture
def two_regions():
    """Two disks of radius 0.1 at +-(0.5, 0.5)."""
    return SmallRegionSet(
        centers=((-0.5, -0.5), (0.5, 0.5)), r0=0.1, n=1 + 2j, mu=2.5 - 1.5j, gamma=1.5 - 2j
    )


def test_overlapping_regions_rejected():
    """Test disks closer than 2 r0 are refused."""
    with pytest.raises(InvalidGeometryError, match="overlap"):
        SmallRegionSet(centers=((0.0, 0.0), (0.15, 0.0)), r0=0.1, n=2, mu=1, gamma=1)


def test_green_singular_at_coincident_points():
    """Test Phi(x, x) raises."""
    with pytest.raises(SingularArgumentError):
        green2d([0.2, 0.1], [0.2, 0.1], 3.0)


def test_volume_rule_integrates_area():
    """Test the polar rule reproduces the disk area and first moment."""
    points, weights = disk_volume_rule((0.3, -0.2), 0.1, 8, 16)
    assert np.sum(weights) == pytest.approx(np.pi * 0.01, rel=1e-13)
    np.testing.assert_allclose(weights @ points / np.sum(weights), [0.3, -0.2], atol=1e-14)


def _plane_wave_on_circle(center, r0, t, d, k):
    x = center[0] + r0 * np.cos(t)
    y = center[1] + r0 * np.sin(t)
    return np.exp(1j * k * (x * d[0] + y * d[1]))


def test_lb_plane_wave_without_mu_is_gamma_times_wave():
    """Test B(u) = gamma u when mu = 0."""
    t = np.linspace(0, 2 * np.pi, 9)
    center, r0, d, k = np.array([0.2, 0.1]), 0.1, np.array([0.6, 0.8]), 3 * np.pi
    wave = _plane_wave_on_circle(center, r0, t, d, k)
    np.testing.assert_allclose(lb_plane_wave(center, r0, t, d, k, 0.0, 2.0), 2.0 * wave)


def test_lb_plane_wave_matches_finite_differences():
    """Test the tangential second derivative against differences in t."""
    center, r0, d, k = np.array([0.2, 0.1]), 0.1, np.array([0.6, 0.8]), 3 * np.pi
    t, h = np.linspace(0.2, 6.0, 5), 1e-4

    def wave(s):
        return _plane_wave_on_circle(center, r0, s, d, k)

    second = (wave(t + h) - 2 * wave(t) + wave(t - h)) / h**2
    expected = -1.5 * second / r0**2
    actual = lb_plane_wave(center, r0, t, d, k, 1.5, 0.0)
    np.testing.assert_allclose(actual, expected, rtol=1e-5, atol=1e-8)


def test_born_data_shapes_and_superposition(two_regions):
    """Test data of two regions is the sum of the single-region data."""
    setup = MeasurementSetup(radius_omega=1.0, J=16)
    both = born_cauchy_data(two_regions, setup, 3 * np.pi)
    first = born_cauchy_data(two_regions.single(0), setup, 3 * np.pi)
    second = born_cauchy_data(two_regions.single(1), setup, 3 * np.pi)

    assert both.us.shape == (16, 16)
    np.testing.assert_allclose(both.us, first.us + second.us, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(both.dus, first.dus + second.dus, rtol=1e-12, atol=1e-14)


def test_born_close_to_series_for_small_disk():
    """Test the approximation against the exact series for a tiny disk without mu."""
    k, r0 = np.pi, 0.02
    setup = MeasurementSetup(radius_omega=1.0, J=16)
    regions = SmallRegionSet(centers=((0.0, 0.0),), r0=r0, n=1.5, mu=0.0, gamma=0.5)
    cfg = ScattererConfig(k=k, n=1.5, mu=0.0, gamma=0.5, curve=make_curve("circle", [r0]))

    approx = born_cauchy_data(regions, setup, k).us
    exact = sov_cauchy_data(cfg, setup).us
    assert np.linalg.norm(approx - exact) <= 0.15 * np.linalg.norm(exact)


def test_born_quadrature_converged_under_node_doubling(two_regions):
    """Test doubling every node count changes the data by at most 1e-8 relative."""
    setup = MeasurementSetup(radius_omega=1.0, J=16)
    coarse = born_cauchy_data(two_regions, setup, 2 * np.pi)
    fine = born_cauchy_data(
        two_regions, setup, 2 * np.pi, n_radial=32, n_angular=64, n_boundary=128
    )
    for name in ("us", "dus"):
        a, b = getattr(coarse, name), getattr(fine, name)
        assert np.max(np.abs(a - b)) <= 1e-8 * np.max(np.abs(b))


def test_region_leaving_omega_rejected():
    """Test a region crossing the measurement circle."""
    regions = SmallRegionSet(centers=((0.95, 0.0),), r0=0.1, n=2, mu=1, gamma=1)
    with pytest.raises(InvalidGeometryError, match="leaves Omega"):
        born_cauchy_data(regions, MeasurementSetup(radius_omega=1.0, J=8), 2.0)


def test_born_model_has_no_farfield(two_regions):
    """Test the Born model only produces near-field data."""
    model = BornModel(two_regions, 3 * np.pi)
    assert model.cauchy_data(MeasurementSetup(radius_omega=1.0, J=8)).us.shape == (8, 8)
    with pytest.raises(ValueError, match="near-field"):
        model.farfield(8)
