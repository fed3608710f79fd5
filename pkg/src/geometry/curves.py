"""
Module: src.geometry.curves
Purpose: Smooth closed boundary curves with analytic derivatives and periodic quadrature.
Dependencies: numpy
Output: BoundaryCurve / QuadratureRule objects consumed by every solver

Key Concepts:
- 2*pi-periodic parameterization z(t) with analytic z', z'', z'''
- Outward normal nu = (z2', -z1') / |z'| for counter-clockwise curves
- Composite trapezoid rule on equispaced nodes (spectral for smooth periodic integrands)
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.core.errors import InvalidDiscretizationError, InvalidGeometryError

logger = logging.getLogger(__name__)

CURVE_KINDS = ("circle", "ellipse", "kite", "custom")
KITE_STRETCH = 1.5
KITE_BEND = 0.65
POLYGON_SAMPLES = 1024


def _circle(params, t, order):
    cx, cy, radius = params
    c, s = np.cos(t), np.sin(t)
    # derivatives cycle through (cos, sin) -> (-sin, cos) -> (-cos, -sin) -> (sin, -cos)
    cycle = [(c, s), (-s, c), (-c, -s), (s, -c)]
    x, y = cycle[order]
    if order == 0:
        return np.stack([cx + radius * x, cy + radius * y], axis=-1)
    return np.stack([radius * x, radius * y], axis=-1)


def _ellipse(params, t, order):
    a, b, cx, cy = params
    c, s = np.cos(t), np.sin(t)
    cycle = [(c, s), (-s, c), (-c, -s), (s, -c)]
    x, y = cycle[order]
    if order == 0:
        return np.stack([cx + a * x, cy + b * y], axis=-1)
    return np.stack([a * x, b * y], axis=-1)


def _kite(params, t, order):
    # z(t) = (-1.5 sin t, cos t + 0.65 cos 2t - 0.65)
    s1, c1 = np.sin(t), np.cos(t)
    s2, c2 = np.sin(2 * t), np.cos(2 * t)
    a, b = KITE_STRETCH, KITE_BEND
    if order == 0:
        return np.stack([-a * s1, c1 + b * c2 - b], axis=-1)
    if order == 1:
        return np.stack([-a * c1, -s1 - 2 * b * s2], axis=-1)
    if order == 2:
        return np.stack([a * s1, -c1 - 4 * b * c2], axis=-1)
    return np.stack([a * c1, s1 + 8 * b * s2], axis=-1)


def _radial_function(params, t):
    # r(t) = a0 + sum_m (a_m cos mt + b_m sin mt) and its first three derivatives
    a0 = params[2]
    coeffs = np.asarray(params[3:], dtype=float).reshape(-1, 2)
    r = [np.full_like(t, a0), np.zeros_like(t), np.zeros_like(t), np.zeros_like(t)]
    for m, (am, bm) in enumerate(coeffs, start=1):
        cm, sm = np.cos(m * t), np.sin(m * t)
        r[0] = r[0] + am * cm + bm * sm
        r[1] = r[1] + m * (-am * sm + bm * cm)
        r[2] = r[2] - m**2 * (am * cm + bm * sm)
        r[3] = r[3] + m**3 * (am * sm - bm * cm)
    return r


def _radial_series(params, t, order):
    # z = center + r(t) (cos t, sin t)
    cx, cy = params[:2]
    r = _radial_function(params, t)
    c, s = np.cos(t), np.sin(t)
    # Leibniz rule for r(t) e(t) with e = (cos t, sin t)
    e = [(c, s), (-s, c), (-c, -s), (s, -c)]
    binom = [1, order, order * (order - 1) // 2, 1 if order == 3 else 0]
    x = np.zeros_like(t)
    y = np.zeros_like(t)
    for j in range(order + 1):
        x = x + binom[j] * r[order - j] * e[j][0]
        y = y + binom[j] * r[order - j] * e[j][1]
    if order == 0:
        x, y = x + cx, y + cy
    return np.stack([x, y], axis=-1)


_EVALUATORS = {
    "circle": _circle,
    "ellipse": _ellipse,
    "kite": _kite,
    "custom": _radial_series,
}


@dataclass(frozen=True)
class BoundaryCurve:
    """Smooth closed 2*pi-periodic curve with analytic derivatives.

    Attributes:
        kind: One of ``circle``, ``ellipse``, ``kite``, ``custom``.
        params: Normalized parameter tuple (see ``make_curve``).
    """

    kind: str
    params: Tuple[float, ...]

    def derivative(self, t, order=0):
        """Evaluate d^order z / dt^order at ``t``; returns shape ``t.shape + (2,)``."""
        if order not in (0, 1, 2, 3):
            raise ValueError(f"Derivative order must be 0..3, got {order}")
        t = np.mod(np.asarray(t, dtype=float), 2 * np.pi)
        return _EVALUATORS[self.kind](self.params, t, order)

    def point(self, t):
        return self.derivative(t, 0)

    def speed(self, t):
        return np.linalg.norm(self.derivative(t, 1), axis=-1)

    @property
    def centroid(self):
        """Area centroid via Green's theorem."""
        t = 2 * np.pi * np.arange(POLYGON_SAMPLES) / POLYGON_SAMPLES
        z, dz = self.point(t), self.derivative(t, 1)
        cross = z[:, 0] * dz[:, 1] - z[:, 1] * dz[:, 0]
        area = 0.5 * np.mean(cross) * 2 * np.pi
        cx = np.mean(z[:, 0] * cross) * 2 * np.pi / (3 * area)
        cy = np.mean(z[:, 1] * cross) * 2 * np.pi / (3 * area)
        return np.array([cx, cy])

    @property
    def max_radius(self):
        """Largest distance of the curve from the origin."""
        t = 2 * np.pi * np.arange(POLYGON_SAMPLES) / POLYGON_SAMPLES
        return float(np.max(np.linalg.norm(self.point(t), axis=-1)))

    def contains(self, points, scale=1.0):
        """Even-odd point-in-curve test, optionally for the dilation about the centroid.

        Args:
            points: Array of shape (..., 2).
            scale: Homothety factor about the centroid (1.5 gives the 1.5x dilation).

        Returns:
            Boolean array of shape ``points.shape[:-1]``.
        """
        pts = np.asarray(points, dtype=float)
        center = self.centroid
        pts = center + (pts - center) / scale
        t = 2 * np.pi * np.arange(POLYGON_SAMPLES) / POLYGON_SAMPLES
        poly = self.point(t)
        x0, y0 = poly[:, 0], poly[:, 1]
        x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
        px = pts[..., 0][..., None]
        py = pts[..., 1][..., None]
        straddles = (y0 > py) != (y1 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_cross = x0 + (py - y0) * (x1 - x0) / (y1 - y0)
        crossings = np.sum(straddles & (px < x_cross), axis=-1)
        return crossings % 2 == 1


@dataclass(frozen=True)
class QuadratureRule:
    """Equispaced trapezoid rule on a curve.

    Attributes:
        nodes: Parameter values t_i = 2*pi*i/N.
        weights: (2*pi/N) * |z'(t_i)|, so sum(w_i f(z(t_i))) approximates the arc-length integral.
        points: z(t_i), shape (N, 2).
        normals: Outward unit normals at the nodes, shape (N, 2).
    """

    nodes: np.ndarray
    weights: np.ndarray
    points: np.ndarray
    normals: np.ndarray

    @property
    def size(self):
        return len(self.nodes)


def make_curve(kind, params):
    """Build a boundary curve from its kind and parameter list.

    Args:
        kind: ``circle`` (params ``[R]`` or ``[cx, cy, R]``), ``ellipse`` (``[a, b]`` or
            ``[a, b, cx, cy]``), ``kite`` (no params, fixed parameterization) or ``custom``
            (``[cx, cy, a0, a1, b1, a2, b2, ...]`` radial Fourier series).
        params: Sequence of floats.

    Returns:
        Immutable BoundaryCurve.

    Raises:
        InvalidGeometryError: On unknown kinds or nonpositive radii / semi-axes.

    Examples:
        >>> make_curve("circle", [0.5]).point(0.0)
        array([0.5, 0. ])
    """
    params = [float(p) for p in (params or [])]
    if kind == "circle":
        if len(params) == 1:
            params = [0.0, 0.0, params[0]]
        if len(params) != 3:
            raise InvalidGeometryError(f"circle expects [R] or [cx, cy, R], got {params}")
        if params[2] <= 0:
            raise InvalidGeometryError(f"circle radius must be positive, got {params[2]}")
    elif kind == "ellipse":
        if len(params) == 2:
            params = params + [0.0, 0.0]
        if len(params) != 4:
            raise InvalidGeometryError(f"ellipse expects [a, b] or [a, b, cx, cy], got {params}")
        if params[0] <= 0 or params[1] <= 0:
            raise InvalidGeometryError(f"ellipse semi-axes must be positive, got {params[:2]}")
    elif kind == "kite":
        params = []
    elif kind == "custom":
        if len(params) < 3 or (len(params) - 3) % 2:
            raise InvalidGeometryError(
                "custom expects [cx, cy, a0, a1, b1, ...] with paired Fourier coefficients"
            )
        t = 2 * np.pi * np.arange(POLYGON_SAMPLES) / POLYGON_SAMPLES
        radius = _radial_function(tuple(params), t)[0]
        if np.min(radius) <= 0:
            raise InvalidGeometryError(
                f"custom radial function must stay positive, min r(t) = {np.min(radius):.3g}"
            )
    else:
        raise InvalidGeometryError(f"Unknown curve kind '{kind}', expected one of {CURVE_KINDS}")
    return BoundaryCurve(kind=kind, params=tuple(params))


def curve_frame(curve, t):
    """Point, unit tangent, outward unit normal and speed at ``t``.

    Args:
        curve: BoundaryCurve.
        t: Scalar or array of parameters (reduced mod 2*pi).

    Returns:
        Dict with keys ``point``, ``tangent_unit``, ``normal_unit``, ``speed``.
    """
    dz = curve.derivative(t, 1)
    speed = np.asarray(np.linalg.norm(dz, axis=-1))
    tangent = dz / speed[..., None]
    normal = np.stack([tangent[..., 1], -tangent[..., 0]], axis=-1)
    return {
        "point": curve.point(t),
        "tangent_unit": tangent,
        "normal_unit": normal,
        "speed": speed,
    }


def periodic_quadrature(curve, n_nodes):
    """Composite trapezoid rule with N equispaced parameter nodes.

    Args:
        curve: BoundaryCurve.
        n_nodes: Number of nodes N (>= 4).

    Returns:
        QuadratureRule with weights (2*pi/N) * |z'(t_i)|.

    Raises:
        InvalidDiscretizationError: If N < 4.
    """
    if n_nodes < 4:
        raise InvalidDiscretizationError(f"Need at least 4 quadrature nodes, got {n_nodes}")
    nodes = 2 * np.pi * np.arange(n_nodes) / n_nodes
    frame = curve_frame(curve, nodes)
    weights = (2 * np.pi / n_nodes) * frame["speed"]
    arrays = (nodes, weights, frame["point"], frame["normal_unit"])
    for arr in arrays:
        arr.setflags(write=False)
    return QuadratureRule(*arrays)
