"""
Module: src.imaging.indicator
Purpose: Direct sampling indicator W(z) from Cauchy data, its far-field variant and the
         interior (volume + boundary) form used as a cross-check.
Dependencies: numpy, src.specfun, src.forward
Output: IndicatorGrid values

Key Concepts:
- Probing kernel Im Phi(x, z) = J_0(k|x - z|) / 4 and its normal derivative on the
  measurement circle
- W(z) = sum_j | sum_i w_i [u^s d_nu Im Phi(x_i, z) - d_nu u^s Im Phi(x_i, z)] |
- Far variant replaces d_nu u^s by i k u^s
- Sampling points are processed in chunks so memory stays bounded for large grids
"""

import logging

import numpy as np

from src.core.config import CHUNK_SIZE
from src.core.errors import InvalidParameterError, WrongSolverError
from src.forward.born import disk_volume_rule
from src.forward.sov import sov_boundary_source, sov_fields
from src.geometry import periodic_quadrature
from src.specfun import bessel_j

logger = logging.getLogger(__name__)

INTERIOR_RADIAL_NODES = 24
INTERIOR_ANGULAR_NODES = 64
INTERIOR_BOUNDARY_NODES = 128


def im_phi(x, z, k):
    """Imaginary part of the fundamental solution, J_0(k|x - z|) / 4."""
    r = np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(z, dtype=float), axis=-1)
    value = 0.25 * bessel_j(0, k * r).real
    return float(value) if np.ndim(value) == 0 else value


def im_phi_normal_deriv(x, z, k, normal):
    """d/dnu(x) of Im Phi(x, z): -(k/4) J_1(k r) (x - z).nu / r, zero at x = z."""
    delta = np.asarray(x, dtype=float) - np.asarray(z, dtype=float)
    r = np.linalg.norm(delta, axis=-1)
    proj = np.sum(delta * np.asarray(normal, dtype=float), axis=-1)
    safe_r = np.where(r == 0, 1.0, r)
    value = np.where(r == 0, 0.0, -0.25 * k * bessel_j(1, k * r).real * proj / safe_r)
    return float(value) if np.ndim(value) == 0 else value


def _kernels(setup, z, k):
    """Weighted kernel matrices (Nz, J): w_i Im Phi(x_i, z) and w_i d_nu Im Phi(x_i, z)."""
    x = setup.points
    normal = setup.directions
    phi = im_phi(x[None, :, :], z[:, None, :], k)
    dphi = im_phi_normal_deriv(x[None, :, :], z[:, None, :], k, normal[None, :, :])
    w = setup.weights[None, :]
    return w * phi, w * dphi


def indicator_at_points(data, points, k=None, far=False, chunk_size=CHUNK_SIZE):
    """Indicator W(z) at arbitrary sampling points.

    Args:
        data: CauchyData on a measurement circle.
        points: (M, 2) sampling points.
        k: Wavenumber (defaults to ``data.k``).
        far: Use the far variant (d_nu u^s replaced by i k u^s).
        chunk_size: Number of sampling points per block.

    Returns:
        Nonnegative array of shape (M,).

    Raises:
        InvalidParameterError: If there are no points, or the near form is requested
            without normal-derivative data.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[0] == 0:
        raise InvalidParameterError("No sampling points given")
    k = data.k if k is None else k
    if not far and data.dus is None:
        raise InvalidParameterError("Normal-derivative data missing; use the far variant")

    out = np.empty(points.shape[0])
    for start in range(0, points.shape[0], chunk_size):
        z = points[start : start + chunk_size]
        phi, dphi = _kernels(data.setup, z, k)
        if far:
            field = (dphi - 1j * k * phi) @ data.us
        else:
            field = dphi @ data.us - phi @ data.dus
        out[start : start + chunk_size] = np.sum(np.abs(field), axis=1)
    return out


def dsm_indicator(data, grid, k=None):
    """Indicator from full Cauchy data on every grid point."""
    values = indicator_at_points(data, grid.points, k=k)
    logger.info(f"Indicator evaluated on {grid.shape[0]}x{grid.shape[1]} grid")
    return grid.with_values(values)


def dsm_indicator_far(data, grid, k=None):
    """Indicator from u^s only, with the radiation-condition substitution."""
    values = indicator_at_points(data, grid.points, k=k, far=True)
    logger.info(f"Far-variant indicator evaluated on {grid.shape[0]}x{grid.shape[1]} grid")
    return grid.with_values(values)


def interior_form_at_points(
    cfg,
    points,
    angles,
    P=None,
    n_radial=INTERIOR_RADIAL_NODES,
    n_angular=INTERIOR_ANGULAR_NODES,
    n_boundary=INTERIOR_BOUNDARY_NODES,
    chunk_size=CHUNK_SIZE,
):
    """sum_j | int_D k^2 (n - 1) Im Phi u dx - int_dD Im Phi B(u) ds | for a centered disk.

    Raises:
        WrongSolverError: If the scatterer is not a centered disk.
    """
    if not cfg.is_centered_disk:
        raise WrongSolverError("The interior form needs the series total field of a centered disk")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    angles = np.asarray(angles, dtype=float)
    k, R = cfg.k, cfg.radius

    w_vol, q_vol = disk_volume_rule((0.0, 0.0), R, n_radial, n_angular)
    total, _ = sov_fields(cfg, w_vol, angles, P=P)
    volume = (k**2 * (complex(cfg.n) - 1) * q_vol)[:, None] * total

    rule = periodic_quadrature(cfg.curve, n_boundary)
    source = sov_boundary_source(cfg, rule.nodes, angles, P=P) * rule.weights[:, None]

    out = np.empty(points.shape[0])
    for start in range(0, points.shape[0], chunk_size):
        z = points[start : start + chunk_size]
        phi_vol = im_phi(w_vol[None, :, :], z[:, None, :], k)
        phi_bnd = im_phi(rule.points[None, :, :], z[:, None, :], k)
        field = phi_vol @ volume - phi_bnd @ source
        out[start : start + chunk_size] = np.sum(np.abs(field), axis=1)
    return out


def dsm_indicator_interior_form(cfg, grid, angles, P=None):
    """Interior form of the indicator on a grid (disk scatterers only)."""
    values = interior_form_at_points(cfg, grid.points, angles, P=P)
    logger.info(f"Interior-form indicator evaluated on {grid.shape[0]}x{grid.shape[1]} grid")
    return grid.with_values(values)
