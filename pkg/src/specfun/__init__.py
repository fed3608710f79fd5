"""Special functions: integer-order Bessel and Hankel functions for complex arguments."""

from .bessel import (
    bessel_j,
    bessel_j_deriv,
    hankel1,
    hankel1_deriv,
    signed_order,
    validate_lattice,
)

__all__ = [
    "bessel_j",
    "bessel_j_deriv",
    "hankel1",
    "hankel1_deriv",
    "signed_order",
    "validate_lattice",
]
