"""Geometry subpackage: boundary curves, frames and periodic quadrature."""

from .curves import (
    BoundaryCurve,
    QuadratureRule,
    curve_frame,
    make_curve,
    periodic_quadrature,
)

__all__ = ["BoundaryCurve", "QuadratureRule", "curve_frame", "make_curve", "periodic_quadrature"]
