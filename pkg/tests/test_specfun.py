"""Tests for Bessel and Hankel functions in src.specfun."""

import numpy as np
import pytest

from src.core.errors import SingularArgumentError, UnsupportedDomainError
from src.specfun import (
    bessel_j,
    bessel_j_deriv,
    hankel1,
    hankel1_deriv,
    signed_order,
    validate_lattice,
)


def test_known_values():
    """Test reference values of J_0, J_1 and H_0 at real arguments."""
    assert bessel_j(0, 0.0) == 1.0
    assert abs(bessel_j(0, 2.404825557695773)) < 1e-14
    assert bessel_j(1, 1.0).real == pytest.approx(0.44005058574493355, rel=1e-14)
    h0 = hankel1(0, 1.0)
    assert h0.real == pytest.approx(0.7651976865579666, rel=1e-14)
    assert h0.imag == pytest.approx(0.08825696421567697, rel=1e-13)


def test_array_arguments_keep_shape():
    """Test vectorized evaluation keeps the argument shape."""
    z = np.array([[0.5, 1.0 + 0.5j], [2.0 - 0.2j, 3.0]])
    assert bessel_j(3, z).shape == (2, 2)
    assert hankel1(2, z).shape == (2, 2)


def test_derivatives_match_finite_differences():
    """Test recurrence-based derivatives."""
    z, h = 1.3 + 0.4j, 1e-6
    for p in (0, 1, 4):
        fd_j = (bessel_j(p, z + h) - bessel_j(p, z - h)) / (2 * h)
        fd_h = (hankel1(p, z + h) - hankel1(p, z - h)) / (2 * h)
        assert abs(bessel_j_deriv(p, z) - fd_j) < 1e-8
        assert abs(hankel1_deriv(p, z) - fd_h) < 1e-7


def test_signed_order():
    """Test C_{-p} = (-1)^p C_p."""
    z = 2.5 + 0.1j
    assert signed_order(bessel_j, -3, z) == -bessel_j(3, z)
    assert signed_order(bessel_j, -2, z) == bessel_j(2, z)


def test_lattice_identities():
    """Test recurrence, conjugation and Wronskian residuals stay below 1e-10."""
    residuals = validate_lattice()
    for name, value in residuals.items():
        assert value <= 1e-10, name


def test_hankel_singular_at_zero():
    """Test H_p(0) is refused."""
    with pytest.raises(SingularArgumentError):
        hankel1(0, 0.0)


def test_envelope_violations():
    """Test order and argument limits."""
    with pytest.raises(UnsupportedDomainError, match="non-negative integer"):
        bessel_j(-1, 1.0)
    with pytest.raises(UnsupportedDomainError, match="non-negative integer"):
        bessel_j(1.5, 1.0)
    with pytest.raises(UnsupportedDomainError, match="exceeds"):
        bessel_j(65, 1.0)
    with pytest.raises(UnsupportedDomainError, match="exceeds"):
        bessel_j(0, 2000.0)
    with pytest.raises(UnsupportedDomainError, match="lower half-plane"):
        hankel1(0, 1.0 - 2.0j)
    with pytest.raises(UnsupportedDomainError, match="NaN"):
        bessel_j(0, np.nan)
