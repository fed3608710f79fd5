"""
Module: src.forward.born
Purpose: Born-approximation Cauchy data for unions of small disks.
Dependencies: numpy, src.specfun, src.geometry
Output: CauchyData on the measurement circle

Key Concepts:
- u^s(x) ~ sum_j [ int_{D_j} k^2 (n-1) Phi(x,w) u^i(w) dw - int_{dD_j} Phi(x,w) B(u^i)(w) ds ]
- B(u) = -mu d^2u/ds^2 + gamma u, applied analytically to the plane wave
- Polar Gauss-Legendre (radial) x trapezoid (angular) volume rule per disk,
  periodic trapezoid rule on each boundary circle
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.core.config import BORN_ANGULAR_NODES, BORN_BOUNDARY_NODES, BORN_RADIAL_NODES
from src.core.errors import InvalidGeometryError, SingularArgumentError
from src.forward.types import CauchyData
from src.geometry import make_curve, periodic_quadrature
from src.specfun import hankel1

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmallRegionSet:
    """Disjoint disks of common radius r0 sharing n, mu, gamma.

    Attributes:
        centers: Tuple of (x, y) centers.
        r0: Common radius.
        n: Refractive index.
        mu: Laplace-Beltrami coefficient.
        gamma: Zeroth-order boundary coefficient.
    """

    centers: Tuple[Tuple[float, float], ...]
    r0: float
    n: complex
    mu: complex
    gamma: complex

    def __post_init__(self):
        if self.r0 <= 0:
            raise InvalidGeometryError(f"Region radius must be positive, got {self.r0}")
        c = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        for i in range(len(c)):
            for j in range(i + 1, len(c)):
                if np.linalg.norm(c[i] - c[j]) <= 2 * self.r0:
                    raise InvalidGeometryError(
                        f"Regions {i} and {j} overlap: distance "
                        f"{np.linalg.norm(c[i] - c[j]):.4g} <= {2 * self.r0:.4g}"
                    )

    def single(self, index):
        """The set restricted to one region."""
        return SmallRegionSet((tuple(self.centers[index]),), self.r0, self.n, self.mu, self.gamma)


def green2d(x, y, k):
    """Free-space Helmholtz fundamental solution Phi(x,y) = (i/4) H_0^(1)(k|x-y|).

    Raises:
        SingularArgumentError: If x and y coincide.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    r = np.linalg.norm(x - y, axis=-1)
    if np.any(r == 0):
        raise SingularArgumentError("Green's function is singular at coincident points")
    value = 0.25j * hankel1(0, k * r)
    return complex(value) if np.ndim(value) == 0 else value


def _green_and_radial_derivative(x, w, k):
    """Phi(x_i, w_m) and d/dr_x Phi for x on a centered circle; shapes (Nx, Nw)."""
    delta = x[:, None, :] - w[None, :, :]
    r = np.linalg.norm(delta, axis=-1)
    if np.any(r == 0):
        raise SingularArgumentError("Quadrature node coincides with an observation point")
    x_hat = x / np.linalg.norm(x, axis=-1, keepdims=True)
    cos_angle = np.einsum("imd,id->im", delta, x_hat) / r
    phi = 0.25j * hankel1(0, k * r)
    dphi = -0.25j * k * hankel1(1, k * r) * cos_angle
    return phi, dphi


def lb_plane_wave(center, r0, t, direction, k, mu, gamma):
    """Boundary operator B applied to exp(i k w . y) on the circle w(t) = center + r0 e(t).

    Uses d^2/dt^2 e^{ik w.y} = [(i k r0 tau.y)^2 + i k r0 tau'.y] e^{ik w.y} with
    tau = (-sin t, cos t) and d/ds = (1/r0) d/dt.

    Args:
        center: Disk center (2,).
        r0: Disk radius.
        t: Parameter values (scalar or array).
        direction: Unit incident direction y (2,).
        k: Wavenumber.
        mu: Laplace-Beltrami coefficient.
        gamma: Zeroth-order coefficient.

    Returns:
        B(u^i)(w(t)), same shape as ``t``.
    """
    t = np.asarray(t, dtype=float)
    d = np.asarray(direction, dtype=float)
    w_dot = center[0] * d[0] + center[1] * d[1] + r0 * (np.cos(t) * d[0] + np.sin(t) * d[1])
    tau_dot = -np.sin(t) * d[0] + np.cos(t) * d[1]
    dtau_dot = -np.cos(t) * d[0] - np.sin(t) * d[1]
    wave = np.exp(1j * k * w_dot)
    second = ((1j * k * r0 * tau_dot) ** 2 + 1j * k * r0 * dtau_dot) * wave
    value = -mu * second / r0**2 + gamma * wave
    return complex(value) if np.ndim(value) == 0 else value


def disk_volume_rule(center, r0, n_radial, n_angular):
    """Polar Gauss-Legendre x trapezoid nodes and weights on a disk."""
    xg, wg = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * r0 * (xg + 1)
    wr = 0.5 * r0 * wg * r
    theta = 2 * np.pi * np.arange(n_angular) / n_angular
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    points = np.stack([center[0] + rr * np.cos(tt), center[1] + rr * np.sin(tt)], axis=-1)
    weights = np.repeat(wr, n_angular) * (2 * np.pi / n_angular)
    return points.reshape(-1, 2), weights


def born_cauchy_data(
    regions,
    setup,
    k,
    n_radial=BORN_RADIAL_NODES,
    n_angular=BORN_ANGULAR_NODES,
    n_boundary=BORN_BOUNDARY_NODES,
):
    """Born-approximation Cauchy data for a set of small disks.

    Args:
        regions: SmallRegionSet.
        setup: MeasurementSetup.
        k: Wavenumber.
        n_radial: Gauss-Legendre nodes in r per disk.
        n_angular: Trapezoid nodes in theta per disk.
        n_boundary: Trapezoid nodes on each boundary circle.

    Returns:
        CauchyData (sum of the per-region contributions).

    Raises:
        InvalidGeometryError: If a region touches or crosses the measurement circle.
    """
    x = setup.points
    y = setup.directions
    n, mu, gamma = complex(regions.n), complex(regions.mu), complex(regions.gamma)
    us = np.zeros((setup.J, setup.J), dtype=complex)
    dus = np.zeros((setup.J, setup.J), dtype=complex)

    for center in np.asarray(regions.centers, dtype=float).reshape(-1, 2):
        if np.linalg.norm(center) + regions.r0 >= setup.radius_omega:
            raise InvalidGeometryError(
                f"Region at {tuple(center)} with radius {regions.r0} leaves Omega"
            )
        # volume term
        w_vol, q_vol = disk_volume_rule(center, regions.r0, n_radial, n_angular)
        phi, dphi = _green_and_radial_derivative(x, w_vol, k)
        incident = np.exp(1j * k * w_vol @ y.T) * (k**2 * (n - 1) * q_vol)[:, None]
        us += phi @ incident
        dus += dphi @ incident

        # boundary term
        rule = periodic_quadrature(make_curve("circle", [*center, regions.r0]), n_boundary)
        phi_b, dphi_b = _green_and_radial_derivative(x, rule.points, k)
        source = np.stack(
            [lb_plane_wave(center, regions.r0, rule.nodes, yj, k, mu, gamma) for yj in y],
            axis=-1,
        ) * rule.weights[:, None]
        us -= phi_b @ source
        dus -= dphi_b @ source

    logger.info(f"Born Cauchy data: {len(regions.centers)} regions, J={setup.J}, k={k:.6g}")
    return CauchyData(us=us, dus=dus, setup=setup, k=k, notes=["born"])
