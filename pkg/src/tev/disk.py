"""
Module: src.tev.disk
Purpose: Transmission eigenvalues of a disk as zeros of the mode-p determinant.
Dependencies: numpy, src.specfun
Output: TevResult with method ``series_det``

Key Concepts:
- det [[J_p(kR), -J_p(kmR)], [k J_p'(kR), -(km J_p'(kmR) + (gamma + mu p^2/R^2) J_p(kmR))]]
  with m = sqrt(n)
- Argument principle on a circle: zero count from the unwrapped phase, locations from
  the power sums (1/2 pi i) int z^m f'/f dz via Newton's identities
- Complex Newton refinement with a central-difference derivative
- Regions holding too many zeros (or failing refinement) are covered by seven disks of
  half the radius and searched recursively
"""

import logging

import numpy as np

from src.core.config import (
    CONTOUR_MAX_DEPTH,
    CONTOUR_SAMPLES,
    NEWTON_MAX_ITER,
    NEWTON_STEP,
    NEWTON_TOL,
)
from src.core.errors import InvalidParameterError
from src.specfun import bessel_j, bessel_j_deriv
from src.tev.types import TevResult

logger = logging.getLogger(__name__)

MAX_ROOTS_PER_DISK = 4
MAX_CONTOUR_SAMPLES = 4096
DEDUPE_TOL = 1e-8


def disk_matrix(k, p, R, n, mu, gamma):
    """2x2 matrix whose determinant vanishes at the mode-p transmission eigenvalues."""
    kn = k * np.sqrt(complex(n))
    jn = bessel_j(p, kn * R)
    robin = kn * bessel_j_deriv(p, kn * R) + (gamma + mu * p**2 / R**2) * jn
    return np.array(
        [[bessel_j(p, k * R), -jn], [k * bessel_j_deriv(p, k * R), -robin]], dtype=complex
    )


def column_scales(k, p, R, n, mu, gamma):
    """Largest modulus per column of the mode-p matrix."""
    A = disk_matrix(k, p, R, n, mu, gamma)
    scales = np.max(np.abs(A), axis=0)
    return np.where(scales > 0, scales, 1.0)


def disk_determinant(k, p, R, n, mu, gamma, scales=None):
    """Determinant of the mode-p matrix with each column divided by its scale.

    Args:
        k: Complex wavenumber.
        p: Non-negative mode index.
        R: Disk radius.
        n: Refractive index.
        mu: Laplace-Beltrami coefficient.
        gamma: Zeroth-order coefficient.
        scales: Column scales; by default the largest entry of each column at ``k``.
            Pass fixed scales to keep the determinant analytic in ``k``.

    Returns:
        Complex determinant value.
    """
    if p < 0:
        raise InvalidParameterError(f"Mode index must be non-negative, got {p}")
    A = disk_matrix(k, p, R, n, mu, gamma)
    if scales is None:
        scales = column_scales(k, p, R, n, mu, gamma)
    A = A / np.asarray(scales)[None, :]
    return complex(A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])


def _derivative(f, z, step=NEWTON_STEP):
    return (f(z + step) - f(z - step)) / (2 * step)


def newton_refine(f, z0, tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER, step=NEWTON_STEP):
    """Complex Newton iteration with a central-difference derivative.

    Returns:
        Tuple (root, converged).
    """
    z = complex(z0)
    for _ in range(max_iter):
        value = f(z)
        if value == 0:
            return z, True
        slope = _derivative(f, z, step)
        if slope == 0 or not np.isfinite(slope):
            return z, False
        delta = value / slope
        z -= delta
        if abs(delta) <= tol * max(1.0, abs(z)):
            return z, True
    logger.warning(f"Newton refinement did not converge from {z0:.6g}; last iterate {z:.12g}")
    return z, False


def winding_count(f, center, radius, samples=CONTOUR_SAMPLES):
    """Number of zeros of f inside |z - center| < radius from the unwrapped phase.

    The sample count doubles until two successive counts agree.
    """
    previous = None
    while samples <= MAX_CONTOUR_SAMPLES:
        z = center + radius * np.exp(2j * np.pi * np.arange(samples + 1) / samples)
        values = np.array([f(zj) for zj in z])
        phase = np.unwrap(np.angle(values))
        count = int(round((phase[-1] - phase[0]) / (2 * np.pi)))
        if count == previous:
            return count
        previous = count
        samples *= 2
    return previous


def _power_sums(f, center, radius, order, samples):
    """(1/2 pi i) int w^m f'/f dz for w = (z - center)/radius, m = 0..order."""
    w = np.exp(2j * np.pi * np.arange(samples) / samples)
    z = center + radius * w
    ratio = np.array([_derivative(f, zj) / f(zj) for zj in z])
    return np.array([np.mean(w**m * ratio * (z - center)) for m in range(order + 1)])


def _roots_from_power_sums(sums, count):
    """Roots of the monic polynomial with the given power sums (Newton's identities)."""
    e = [1.0 + 0j]
    for m in range(1, count + 1):
        acc = sum((-1) ** (i - 1) * e[m - i] * sums[i] for i in range(1, m + 1))
        e.append(acc / m)
    coeffs = [(-1) ** m * e[m] for m in range(count + 1)]
    return np.roots(coeffs)


def _covering(center, radius):
    """Seven disks of half the radius covering |z - center| <= radius."""
    offsets = [0.0] + [np.sqrt(3) / 2 * radius * np.exp(1j * np.pi * j / 3) for j in range(6)]
    return [(center + o, radius / 2) for o in offsets]


def _search(f, center, radius, depth, max_depth):
    """Recursive zero search; returns lists (roots, converged)."""
    count = winding_count(f, center, radius)
    if count is None or count < 0:
        count = MAX_ROOTS_PER_DISK + 1
    if count == 0:
        return [], []
    if count <= MAX_ROOTS_PER_DISK or depth >= max_depth:
        sums = _power_sums(f, center, radius, min(count, MAX_ROOTS_PER_DISK), CONTOUR_SAMPLES)
        guesses = center + radius * _roots_from_power_sums(sums, len(sums) - 1)
        refined = [newton_refine(f, g) for g in guesses]
        distinct, _ = _dedupe([z for z, _ in refined], [True] * len(refined))
        ok = len(distinct) == len(refined) and all(
            conv and abs(z - center) <= radius * 1.01 for z, conv in refined
        )
        if ok or depth >= max_depth:
            return [z for z, _ in refined], [conv for _, conv in refined]
    roots, flags = [], []
    for sub_center, sub_radius in _covering(center, radius):
        r, c = _search(f, sub_center, sub_radius, depth + 1, max_depth)
        roots += r
        flags += c
    return roots, flags


def _dedupe(roots, flags):
    kept, kept_flags = [], []
    for z, c in zip(roots, flags):
        if all(abs(z - q) > DEDUPE_TOL * max(1.0, abs(z)) for q in kept):
            kept.append(z)
            kept_flags.append(c)
    return kept, kept_flags


def find_disk_tevs(R, n, mu, gamma, region, p_max, max_depth=CONTOUR_MAX_DEPTH):
    """All mode-p determinant zeros inside a circular region for p = 0..p_max.

    Args:
        R: Disk radius.
        n: Refractive index.
        mu: Laplace-Beltrami coefficient.
        gamma: Zeroth-order coefficient.
        region: ContourSpec describing the search disk.
        p_max: Largest mode index.
        max_depth: Maximum subdivision depth.

    Returns:
        TevResult (method ``series_det``); multiplicity 2 for p >= 1, 1 for p = 0.
    """
    if p_max < 0:
        raise InvalidParameterError(f"p_max must be non-negative, got {p_max}")
    center, radius = complex(region.center), float(region.radius)
    eigenvalues, residuals, mults, modes, converged = [], [], [], [], []
    winding_total = 0

    for p in range(p_max + 1):
        scales = column_scales(center, p, R, n, mu, gamma)

        def f(k, p=p, scales=scales):
            return disk_determinant(k, p, R, n, mu, gamma, scales=scales)

        winding_total += winding_count(f, center, radius) or 0
        roots, flags = _dedupe(*_search(f, center, radius, 0, max_depth))
        for z, conv in zip(roots, flags):
            if abs(z - center) > radius:
                continue
            eigenvalues.append(z)
            residuals.append(abs(disk_determinant(z, p, R, n, mu, gamma)))
            mults.append(1 if p == 0 else 2)
            modes.append(p)
            converged.append(conv)
        logger.info(f"Mode p={p}: {len(roots)} determinant zeros near the region")

    result = TevResult(
        eigenvalues=eigenvalues,
        residuals=residuals,
        method="series_det",
        multiplicities=mults,
        modes=modes,
        converged=converged,
        notes=[f"winding count {winding_total}"],
    )
    logger.info(
        f"Disk eigenvalues in |z-{center:.4g}|<={radius:g}: {len(result)} distinct, "
        f"total multiplicity {result.total_multiplicity}"
    )
    return result.sorted()
