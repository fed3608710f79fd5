"""
Module: src.specfun.bessel
Purpose: Bessel J_p and Hankel H_p^(1) of integer order for real and complex arguments.
Dependencies: numpy, scipy.special
Output: Vectorized values with envelope validation

Key Concepts:
- scipy.special wraps the AMOS routines (power series, Miller recurrence and
  asymptotic expansions for complex arguments); this module only guards the
  envelope so callers never receive silent overflow or NaN.
- Negative orders are handled at call sites via C_{-p} = (-1)^p C_p.
- Derivatives use C_p' = (C_{p-1} - C_{p+1}) / 2 and C_0' = -C_1.
"""

import logging

import numpy as np
from scipy import special

from src.core.config import MAX_ABS_ARGUMENT, MAX_ORDER, MIN_IMAG_RATIO
from src.core.errors import SingularArgumentError, UnsupportedDomainError

logger = logging.getLogger(__name__)


def _check_order(p):
    if int(p) != p or p < 0:
        raise UnsupportedDomainError(f"Order must be a non-negative integer, got {p}")
    if p > MAX_ORDER:
        raise UnsupportedDomainError(f"Order {p} exceeds supported maximum {MAX_ORDER}")
    return int(p)


def _check_argument(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise UnsupportedDomainError("Argument contains NaN or Inf")
    if z.size and np.max(np.abs(z)) > MAX_ABS_ARGUMENT:
        raise UnsupportedDomainError(
            f"|z| = {np.max(np.abs(z)):.3g} exceeds supported maximum {MAX_ABS_ARGUMENT:g}"
        )
    return z


def _check_hankel_argument(z):
    z = _check_argument(z)
    if np.any(z == 0):
        raise SingularArgumentError("Hankel function is singular at z = 0")
    floor = MIN_IMAG_RATIO * np.maximum(1.0, np.abs(z))
    if np.any(z.imag < floor):
        raise UnsupportedDomainError(
            f"Im z = {np.min(z.imag):.3g} below the supported lower half-plane strip"
        )
    return z


def _finite_or_raise(values, name, p):
    if not np.all(np.isfinite(values)):
        raise UnsupportedDomainError(f"{name}_{p} overflowed inside the requested arguments")
    return values


def _unwrap(values, z_in):
    if np.ndim(z_in) == 0:
        return complex(values)
    return values


def bessel_j(p, z):
    """Bessel function of the first kind J_p(z).

    Args:
        p: Non-negative integer order (<= MAX_ORDER).
        z: Complex scalar or array with |z| <= MAX_ABS_ARGUMENT.

    Returns:
        J_p(z) with the shape of ``z`` (complex scalar for scalar input).

    Raises:
        UnsupportedDomainError: If the order or argument is outside the envelope.

    Examples:
        >>> bessel_j(0, 0.0)
        (1+0j)
    """
    p = _check_order(p)
    zz = _check_argument(z)
    values = _finite_or_raise(special.jv(p, zz), "J", p)
    return _unwrap(values, z)


def hankel1(p, z):
    """Hankel function of the first kind H_p^(1)(z) = J_p(z) + i Y_p(z).

    Args:
        p: Non-negative integer order.
        z: Nonzero complex scalar or array with Im z >= MIN_IMAG_RATIO * max(1, |z|).

    Returns:
        H_p^(1)(z) with the shape of ``z``.

    Raises:
        SingularArgumentError: If any argument is zero.
        UnsupportedDomainError: If the order or argument is outside the envelope.
    """
    p = _check_order(p)
    zz = _check_hankel_argument(z)
    values = _finite_or_raise(special.hankel1(p, zz), "H", p)
    return _unwrap(values, z)


def bessel_j_deriv(p, z):
    """Derivative J_p'(z) via the three-term recurrence."""
    p = _check_order(p)
    if p == 0:
        return -bessel_j(1, z)
    return 0.5 * (bessel_j(p - 1, z) - bessel_j(p + 1, z))


def hankel1_deriv(p, z):
    """Derivative H_p^(1)'(z) via the three-term recurrence."""
    p = _check_order(p)
    if p == 0:
        return -hankel1(1, z)
    return 0.5 * (hankel1(p - 1, z) - hankel1(p + 1, z))


def signed_order(func, p, z):
    """Evaluate ``func`` at a possibly negative integer order using C_{-p} = (-1)^p C_p."""
    value = func(abs(p), z)
    if p < 0 and p % 2:
        return -value
    return value


def validate_lattice(n_modulus=24, n_angle=13, max_order=20):
    """Run the identity checks used to gate every solver.

    Checks the three-term recurrence and conjugate symmetry of J_p on
    |z| in [0.1, 60], |arg z| <= pi/3, and the Wronskian
    J_p H_p' - J_p' H_p = 2i/(pi z) on the part of that lattice inside the
    Hankel envelope.

    Args:
        n_modulus: Number of moduli (log-spaced).
        n_angle: Number of arguments.
        max_order: Largest order checked.

    Returns:
        Dict with max relative residuals ``recurrence``, ``conjugation`` and ``wronskian``.
    """
    moduli = np.geomspace(0.1, 60.0, n_modulus)
    angles = np.linspace(-np.pi / 3, np.pi / 3, n_angle)
    z = (moduli[:, None] * np.exp(1j * angles[None, :])).ravel()

    j = np.array([bessel_j(p, z) for p in range(max_order + 2)])
    recurrence = 0.0
    for p in range(1, max_order + 1):
        resid = np.abs(j[p - 1] + j[p + 1] - (2 * p / z) * j[p])
        scale = np.maximum.reduce(
            [np.ones_like(resid), np.abs(j[p - 1]), np.abs(j[p]), np.abs(j[p + 1])]
        )
        recurrence = max(recurrence, float(np.max(resid / scale)))

    conjugation = 0.0
    for p in range(max_order + 1):
        resid = np.abs(bessel_j(p, np.conj(z)) - np.conj(j[p]))
        conjugation = max(conjugation, float(np.max(resid / np.maximum(1.0, np.abs(j[p])))))

    inside = z.imag >= MIN_IMAG_RATIO * np.maximum(1.0, np.abs(z))
    zh = z[inside]
    wronskian = 0.0
    for p in range(max_order + 1):
        jp, djp = bessel_j(p, zh), bessel_j_deriv(p, zh)
        hp, dhp = hankel1(p, zh), hankel1_deriv(p, zh)
        resid = np.abs(jp * dhp - djp * hp - 2j / (np.pi * zh))
        scale = np.maximum.reduce(
            [np.abs(2.0 / (np.pi * zh)), np.abs(jp * dhp), np.abs(djp * hp)]
        )
        wronskian = max(wronskian, float(np.max(resid / scale)))

    logger.info(
        f"Special-function lattice: recurrence={recurrence:.2e}, "
        f"conjugation={conjugation:.2e}, wronskian={wronskian:.2e}"
    )
    return {"recurrence": recurrence, "conjugation": conjugation, "wronskian": wronskian}
