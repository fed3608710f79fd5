"""
Module: src.forward.sov
Purpose: Exact-series forward solver for a centered disk with the delamination condition.
Dependencies: numpy, src.specfun
Output: Mode coefficients, Cauchy data on the measurement circle, far-field matrices

Key Concepts:
- Jacobi-Anger expansion of the incident plane wave, one 2x2 system per mode p
- Cramer's rule with determinant guard and residual verification
- Modes are even in p (us_{-p} = us_p), so every field is a cosine series in theta - phi
- Fields are tabulated on the J distinct angle differences and gathered into an
  exactly circulant J x J matrix
"""

import logging

import numpy as np

from src.core.config import (
    MAX_ORDER,
    SOV_DET_TOL,
    SOV_RESIDUAL_TOL,
    SOV_TAIL_TOL,
    SOV_TRUNCATION,
)
from src.core.errors import InvalidParameterError, NearResonanceError, WrongSolverError
from src.forward.types import CauchyData
from src.specfun import bessel_j, bessel_j_deriv, hankel1, hankel1_deriv

logger = logging.getLogger(__name__)


def _require_disk(cfg):
    if not cfg.is_centered_disk:
        raise WrongSolverError(
            f"Separation of variables needs a circle centered at the origin, got "
            f"{cfg.curve.kind} {cfg.curve.params}; use the boundary integral solver"
        )


def _system(p, cfg):
    """Matrix and right-hand side of the mode-p transmission system."""
    p = abs(int(p))
    k, kn, R = cfg.k, cfg.k_interior, cfg.radius
    mu, gamma = complex(cfg.mu), complex(cfg.gamma)
    jn = bessel_j(p, kn * R)
    robin = kn * bessel_j_deriv(p, kn * R) + (mu * p**2 / R**2 + gamma) * jn
    A = np.array(
        [[hankel1(p, k * R), -jn], [k * hankel1_deriv(p, k * R), -robin]],
        dtype=complex,
    )
    b = np.array([-bessel_j(p, k * R), -k * bessel_j_deriv(p, k * R)], dtype=complex)
    return A, b


def sov_mode_coefficients(p, cfg):
    """Solve the 2x2 system for mode p with Cramer's rule.

    Args:
        p: Mode index (the system depends on |p| only).
        cfg: ScattererConfig with a centered circular boundary of radius R.

    Returns:
        Tuple (us_p, u_p) of scattered and interior coefficients.

    Raises:
        WrongSolverError: If the boundary is not a centered circle.
        NearResonanceError: If the determinant is negligible relative to the matrix scale
            or the back-substituted residual exceeds the tolerance.
    """
    _require_disk(cfg)
    A, b = _system(p, cfg)
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    scale = abs(A[0, 0] * A[1, 1]) + abs(A[0, 1] * A[1, 0])
    if abs(det) <= SOV_DET_TOL * scale:
        raise NearResonanceError(
            f"Mode system is numerically singular for p={p}, k={cfg.k} (|det|/scale="
            f"{abs(det) / scale:.2e})"
        )
    us_p = (b[0] * A[1, 1] - A[0, 1] * b[1]) / det
    u_p = (A[0, 0] * b[1] - b[0] * A[1, 0]) / det

    x = np.array([us_p, u_p])
    residual = np.linalg.norm(A @ x - b) / (
        np.linalg.norm(A) * np.linalg.norm(x) + np.linalg.norm(b)
    )
    if residual > SOV_RESIDUAL_TOL:
        raise NearResonanceError(
            f"Cramer solution residual {residual:.2e} exceeds {SOV_RESIDUAL_TOL:g} for p={p}"
        )
    return complex(us_p), complex(u_p)


def sov_modes(cfg, P):
    """Coefficients for p = 0..P as two complex arrays (us, u)."""
    if P < 0 or P >= MAX_ORDER:
        raise InvalidParameterError(f"Truncation order must lie in [0, {MAX_ORDER - 1}], got {P}")
    pairs = [sov_mode_coefficients(p, cfg) for p in range(P + 1)]
    us = np.array([pair[0] for pair in pairs])
    u = np.array([pair[1] for pair in pairs])
    return us, u


def tail_ratio(us_modes):
    """|us_P| / max_p |us_p| for a mode array."""
    peak = np.max(np.abs(us_modes))
    if peak == 0:
        return 0.0
    return float(abs(us_modes[-1]) / peak)


def choose_truncation(cfg, start=SOV_TRUNCATION, tol=SOV_TAIL_TOL):
    """Smallest P >= start whose last mode is below ``tol`` relative to the largest."""
    for P in range(start, MAX_ORDER):
        us, _ = sov_modes(cfg, P)
        if tail_ratio(us) <= tol:
            return P
    logger.warning(f"Tail tolerance {tol:g} not reached below order {MAX_ORDER - 1}")
    return MAX_ORDER - 1


def _resolve_truncation(cfg, P, adaptive):
    if P is None:
        P = SOV_TRUNCATION
    if adaptive:
        P = max(P, choose_truncation(cfg, start=P))
    us, u = sov_modes(cfg, P)
    ratio = tail_ratio(us)
    if ratio > SOV_TAIL_TOL:
        logger.warning(
            f"Series tail |us_{P}|/max|us_p| = {ratio:.2e} exceeds {SOV_TAIL_TOL:g}; "
            f"consider a larger truncation order"
        )
    return P, us, u


def _cosine_series(coeffs, angle_diff):
    """sum_{|p|<=P} c_|p| e^{ip a} for even coefficient sequences."""
    p = np.arange(len(coeffs))
    weights = np.where(p == 0, 1.0, 2.0) * coeffs
    return np.cos(np.multiply.outer(angle_diff, p)) @ weights


def _circulant(profile, J):
    idx = (np.arange(J)[:, None] - np.arange(J)[None, :]) % J
    return profile[idx]


def sov_cauchy_data(cfg, setup, P=None, adaptive=False):
    """Cauchy data (u^s, d_r u^s) on the measurement circle from the series solution.

    Args:
        cfg: ScattererConfig with a centered circle.
        setup: MeasurementSetup (radius_omega > R).
        P: Truncation order (default from config, 15).
        adaptive: Increase P until the tail check passes.

    Returns:
        CauchyData with exactly circulant J x J matrices.
    """
    _require_disk(cfg)
    setup.check_encloses(cfg.curve)
    P, us_modes, _ = _resolve_truncation(cfg, P, adaptive)
    rho = cfg.k * setup.radius_omega
    phase = np.array([1j**p for p in range(P + 1)])
    h = np.array([hankel1(p, rho) for p in range(P + 1)])
    dh = np.array([hankel1_deriv(p, rho) for p in range(P + 1)])

    diff = 2 * np.pi * np.arange(setup.J) / setup.J
    us = _circulant(_cosine_series(phase * us_modes * h, diff), setup.J)
    dus = _circulant(cfg.k * _cosine_series(phase * us_modes * dh, diff), setup.J)
    logger.info(f"Series Cauchy data: J={setup.J}, k={cfg.k:.6g}, P={P}")
    return CauchyData(us=us, dus=dus, setup=setup, k=cfg.k, notes=[f"sov P={P}"])


def sov_farfield(cfg, J, P=None, adaptive=False):
    """Far-field matrix F(i,j) = (4/i) sum_p us_p e^{ip(theta_i - phi_j)}."""
    _require_disk(cfg)
    P, us_modes, _ = _resolve_truncation(cfg, P, adaptive)
    diff = 2 * np.pi * np.arange(J) / J
    return _circulant((4 / 1j) * _cosine_series(us_modes.astype(complex), diff), J)


def sov_fields(cfg, points, angles, P=None):
    """Total field inside the disk and scattered field outside at arbitrary points.

    Args:
        cfg: ScattererConfig with a centered circle.
        points: Array (M, 2).
        angles: Incident direction angles phi_j, shape (Nd,).
        P: Truncation order.

    Returns:
        Tuple (total_inside, scattered_outside) of (M, Nd) arrays; entries for points on
        the wrong side of the boundary are NaN. Points with r <= R count as inside.
    """
    _require_disk(cfg)
    P, us_modes, u_modes = _resolve_truncation(cfg, P, False)
    points = np.atleast_2d(points)
    r = np.hypot(points[:, 0], points[:, 1])
    theta = np.arctan2(points[:, 1], points[:, 0])
    diff = theta[:, None] - np.asarray(angles)[None, :]
    inside = r <= cfg.radius

    total = np.zeros(diff.shape, dtype=complex)
    scattered = np.zeros(diff.shape, dtype=complex)
    for p in range(P + 1):
        eps = 1.0 if p == 0 else 2.0
        angular = eps * (1j**p) * np.cos(p * diff)
        if np.any(inside):
            radial = bessel_j(p, cfg.k_interior * r[inside])
            total[inside] += (u_modes[p] * radial)[:, None] * angular[inside]
        if np.any(~inside):
            radial = hankel1(p, cfg.k * r[~inside])
            scattered[~inside] += (us_modes[p] * radial)[:, None] * angular[~inside]
    total[~inside] = np.nan
    scattered[inside] = np.nan
    return total, scattered


def sov_boundary_source(cfg, thetas, angles, P=None):
    """Boundary operator B(u) = -mu u_ss + gamma u of the total field on the disk boundary.

    On the circle d^2/ds^2 acts on mode p as -p^2/R^2, so the mode-p term is
    (mu p^2 / R^2 + gamma) u_p J_p(k sqrt(n) R).
    """
    _require_disk(cfg)
    P, _, u_modes = _resolve_truncation(cfg, P, False)
    R = cfg.radius
    p = np.arange(P + 1)
    radial = np.array([bessel_j(q, cfg.k_interior * R) for q in p])
    factor = (complex(cfg.mu) * p**2 / R**2 + complex(cfg.gamma)) * u_modes * radial
    factor = factor * np.array([1j**q for q in p]) * np.where(p == 0, 1.0, 2.0)
    diff = np.asarray(thetas)[:, None] - np.asarray(angles)[None, :]
    return np.cos(diff[..., None] * p) @ factor


def jacobi_anger_residual(k, r, P, n_angles=64):
    """Max deviation of the truncated Jacobi-Anger series from exp(i k r cos(theta))."""
    theta = 2 * np.pi * np.arange(n_angles) / n_angles
    series = np.zeros(n_angles, dtype=complex)
    for p in range(-P, P + 1):
        jp = bessel_j(abs(p), k * r) * ((-1) ** p if p < 0 else 1)
        series += (1j**p) * jp * np.exp(1j * p * theta)
    return float(np.max(np.abs(series - np.exp(1j * k * r * np.cos(theta)))))
