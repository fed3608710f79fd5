"""
Module: src.forward.bie
Purpose: Boundary-integral forward solver for smooth scatterers with the delamination condition.
Dependencies: numpy, scipy.linalg, src.specfun, src.geometry
Output: Layer densities, Cauchy data on the measurement circle, far-field matrices

Key Concepts:
- Single-layer ansatz u^s = SL_k phi outside, u = SL_{k sqrt(n)} psi inside
- Logarithmic-singularity splitting on the equispaced grid t_j = pi j / n, N = 2n:
  kernel = M1 ln(4 sin^2((t - tau)/2)) + M2 with trigonometric weights R_j(t) for the
  log part and the trapezoid rule for the smooth part
- Tangential second derivative by centered differences of S evaluated at z(t +- h); the
  default step shrinks with the node spacing, h = fd_step * fd_reference_faces / N_f
- One LU factorization of the 2N x 2N block matrix shared by all incident directions
"""

import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy import linalg

from src.core.config import (
    BIE_COND_WARN,
    BIE_FD_REFERENCE_FACES,
    BIE_FD_STEP,
    BIE_NODES_PER_FACE,
    BIE_RESIDUAL_TOL,
)
from src.core.errors import (
    InvalidDiscretizationError,
    InvalidParameterError,
    NearResonanceError,
    ShapeMismatchError,
    UnsupportedDomainError,
)
from src.forward.types import CauchyData
from src.geometry import curve_frame
from src.specfun import bessel_j, hankel1

logger = logging.getLogger(__name__)

COINCIDENCE_TOL = 1e-12


def _check_nodes(n_nodes):
    if n_nodes < 4 or n_nodes % 2:
        raise InvalidDiscretizationError(
            f"Log-splitting quadrature needs an even node count >= 4, got {n_nodes}"
        )
    return int(n_nodes)


def _check_wavenumber(tau):
    tau = complex(tau)
    if tau == 0:
        raise UnsupportedDomainError("Wavenumber 0 (Laplace kernel) is not supported")
    return tau


def collocation_nodes(n_nodes):
    """Equispaced parameter nodes t_j = 2 pi j / N."""
    return 2 * np.pi * np.arange(n_nodes) / n_nodes


def fd_step(N_f, h=None):
    """Finite-difference step for a grid with N_f faces.

    An explicit ``h`` is returned unchanged. Otherwise the configured step applies at
    ``fd_reference_faces`` faces and scales with the node spacing, so the O(h^2)
    difference error keeps falling as the grid is refined.
    """
    if h is not None:
        return float(h)
    return BIE_FD_STEP * BIE_FD_REFERENCE_FACES / int(N_f)


def _log_weights(n_nodes, shift):
    """Matrix R_j(t_i + shift) of the trigonometric log-kernel weights (circulant)."""
    n = n_nodes // 2
    d = 2 * np.pi * np.arange(n_nodes) / n_nodes + shift
    m = np.arange(1, n)
    profile = -(2 * np.pi / n) * (np.cos(np.outer(d, m)) @ (1.0 / m))
    profile -= (np.pi / n**2) * np.cos(n * d)
    idx = (np.arange(n_nodes)[:, None] - np.arange(n_nodes)[None, :]) % n_nodes
    return profile[idx]


def _pair_geometry(curve, n_nodes, shift):
    """Distances, log factor and coincidence mask between targets z(t_i + shift) and nodes."""
    t = collocation_nodes(n_nodes)
    s = t + shift
    x, y = curve.point(s), curve.point(t)
    delta = x[:, None, :] - y[None, :, :]
    r = np.linalg.norm(delta, axis=-1)
    half = np.sin(0.5 * (s[:, None] - t[None, :]))
    coincident = np.abs(half) < COINCIDENCE_TOL
    safe_half = np.where(coincident, 1.0, half)
    log_factor = np.where(coincident, 0.0, np.log(4 * safe_half**2))
    return {
        "s": s,
        "t": t,
        "delta": delta,
        "r": np.where(coincident, 1.0, r),
        "coincident": coincident,
        "log": log_factor,
        "speed_src": curve.speed(t)[None, :],
        "speed_tgt": curve.speed(s),
    }


def assemble_single_layer(curve, tau, n_nodes, shift=0.0):
    """Single-layer matrix phi -> int Phi_tau(x_i, y) phi(y) ds(y).

    Args:
        curve: BoundaryCurve.
        tau: Complex wavenumber (nonzero).
        n_nodes: Even number of collocation nodes N.
        shift: Parameter offset of the targets, x_i = z(t_i + shift).

    Returns:
        Complex (N, N) matrix acting on nodal density values.

    Raises:
        UnsupportedDomainError: If tau is zero.
        InvalidDiscretizationError: If N is odd or smaller than 4.
    """
    n_nodes = _check_nodes(n_nodes)
    tau = _check_wavenumber(tau)
    g = _pair_geometry(curve, n_nodes, shift)
    kr = tau * g["r"]
    full = 0.25j * hankel1(0, kr) * g["speed_src"]
    singular = -bessel_j(0, kr) * g["speed_src"] / (4 * np.pi)
    smooth = full - singular * g["log"]

    mask = g["coincident"]
    if np.any(mask):
        rows = np.nonzero(mask)[0]
        speed = g["speed_tgt"][rows]
        singular[mask] = -speed / (4 * np.pi)
        smooth[mask] = (
            0.25j - np.euler_gamma / (2 * np.pi) - np.log(tau * speed / 2) / (2 * np.pi)
        ) * speed

    n = n_nodes // 2
    return _log_weights(n_nodes, shift) * singular + (np.pi / n) * smooth


def assemble_normal_derivative(curve, tau, n_nodes):
    """Adjoint double-layer matrix phi -> int d_nu(x) Phi_tau(x_i, y) phi(y) ds(y).

    The +-1/2 jump terms are added at system assembly.
    """
    n_nodes = _check_nodes(n_nodes)
    tau = _check_wavenumber(tau)
    g = _pair_geometry(curve, n_nodes, 0.0)
    normal = curve_frame(curve, g["s"])["normal_unit"]
    proj = np.einsum("ijd,id->ij", g["delta"], normal) / g["r"]
    kr = tau * g["r"]
    full = -0.25j * tau * hankel1(1, kr) * proj * g["speed_src"]
    singular = tau / (4 * np.pi) * bessel_j(1, kr) * proj * g["speed_src"]
    smooth = full - singular * g["log"]

    mask = g["coincident"]
    dz = curve.derivative(g["s"], 1)
    ddz = curve.derivative(g["s"], 2)
    curvature_term = (ddz[:, 0] * dz[:, 1] - ddz[:, 1] * dz[:, 0]) / (
        4 * np.pi * g["speed_tgt"] ** 2
    )
    rows = np.nonzero(mask)[0]
    singular[mask] = 0.0
    smooth[mask] = curvature_term[rows]

    n = n_nodes // 2
    return _log_weights(n_nodes, 0.0) * singular + (np.pi / n) * smooth


def tangential_second_derivative(curve, tau, n_nodes, h=BIE_FD_STEP, base=None):
    """Operator phi -> d^2/ds^2 (S_tau phi) on the boundary by centered differences.

    Uses (1/|z'|) d/dt ((1/|z'|) d/dt) with S evaluated at the shifted targets
    z(t_i +- h); ``base`` may pass an already assembled S_tau at the nodes.

    Raises:
        InvalidParameterError: If h <= 0.
    """
    if not h > 0:
        raise InvalidParameterError(f"Finite-difference step must be positive, got h={h}")
    if base is None:
        base = assemble_single_layer(curve, tau, n_nodes)
    plus = assemble_single_layer(curve, tau, n_nodes, shift=h)
    minus = assemble_single_layer(curve, tau, n_nodes, shift=-h)
    first = (plus - minus) / (2 * h)
    second = (plus - 2 * base + minus) / h**2

    t = collocation_nodes(n_nodes)
    dz, ddz = curve.derivative(t, 1), curve.derivative(t, 2)
    speed = np.linalg.norm(dz, axis=-1)
    d_inv_speed = -np.sum(dz * ddz, axis=-1) / speed**3
    return (d_inv_speed / speed)[:, None] * first + (1 / speed**2)[:, None] * second


@dataclass
class BieOperatorSet:
    """Boundary operators at k and k sqrt(n) on one collocation grid."""

    S_k: np.ndarray
    S_kn: np.ndarray
    Dt_k: np.ndarray
    Dt_kn: np.ndarray
    T_kn: np.ndarray

    @property
    def size(self):
        return self.S_k.shape[0]


def assemble_operators(curve, k, kn, n_nodes, h=BIE_FD_STEP):
    """Assemble every block operator of the transmission system."""
    S_kn = assemble_single_layer(curve, kn, n_nodes)
    ops = BieOperatorSet(
        S_k=assemble_single_layer(curve, k, n_nodes),
        S_kn=S_kn,
        Dt_k=assemble_normal_derivative(curve, k, n_nodes),
        Dt_kn=assemble_normal_derivative(curve, kn, n_nodes),
        T_kn=tangential_second_derivative(curve, kn, n_nodes, h=h, base=S_kn),
    )
    logger.debug(f"Assembled boundary operators: N={n_nodes}, k={k}, k*sqrt(n)={kn}")
    return ops


def block_matrix(ops, mu, gamma, interior_sign=-1.0):
    """2N x 2N block matrix of the transmission system.

    ``interior_sign`` is the sign of the 1/2 jump in the first block of the second row:
    -1 for the scattering problem (exterior trace), +1 for the eigenvalue problem.
    """
    eye = np.eye(ops.size)
    robin = 0.5 * eye + ops.Dt_kn + gamma * ops.S_kn - mu * ops.T_kn
    return np.block(
        [
            [ops.S_k, -ops.S_kn],
            [0.5 * interior_sign * eye + ops.Dt_k, -robin],
        ]
    )


@dataclass
class LayerDensities:
    """Exterior and interior densities on the collocation grid.

    Attributes:
        phi: (N, Nd) exterior densities, one column per incident direction.
        psi: (N, Nd) interior densities.
        nodes: Collocation parameters t_j.
        curve: Boundary curve.
        k: Exterior wavenumber.
        directions: (Nd, 2) incident directions.
        residual: Relative block-system residual.
        condition: 2-norm condition estimate of the block matrix.
        notes: Warnings attached during the solve.
    """

    phi: np.ndarray
    psi: np.ndarray
    nodes: np.ndarray
    curve: object
    k: float
    directions: np.ndarray
    residual: float = 0.0
    condition: float = 1.0
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.phi.shape != self.psi.shape or self.phi.shape[0] != len(self.nodes):
            raise ShapeMismatchError(
                f"Density shapes {self.phi.shape}/{self.psi.shape} do not match "
                f"{len(self.nodes)} nodes"
            )

    @property
    def weights(self):
        """Trapezoid arc-length weights at the nodes."""
        return (2 * np.pi / len(self.nodes)) * self.curve.speed(self.nodes)


def solve_bie(cfg, N_f, h=None, directions=None, nodes_per_face=BIE_NODES_PER_FACE):
    """Solve the block system for one or several incident plane waves.

    Args:
        cfg: ScattererConfig (any smooth curve).
        N_f: Number of boundary faces; the grid has N_c = nodes_per_face * N_f nodes.
        h: Finite-difference step of the tangential second derivative; None scales the
            configured step with the node spacing (see ``fd_step``).
        directions: Incident direction(s), shape (2,) or (Nd, 2); default (1, 0).
        nodes_per_face: Collocation nodes per face.

    Returns:
        LayerDensities with one column per direction.

    Raises:
        NearResonanceError: If the solution fails the residual check.
    """
    n_nodes = nodes_per_face * int(N_f)
    h = fd_step(N_f, h)
    if directions is None:
        directions = np.array([1.0, 0.0])
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    k, kn = cfg.k, cfg.k_interior
    mu, gamma = complex(cfg.mu), complex(cfg.gamma)

    ops = assemble_operators(cfg.curve, k, kn, n_nodes, h=h)
    A = block_matrix(ops, mu, gamma, interior_sign=-1.0)

    t = collocation_nodes(n_nodes)
    frame = curve_frame(cfg.curve, t)
    incident = np.exp(1j * k * frame["point"] @ directions.T)
    d_incident = 1j * k * (frame["normal_unit"] @ directions.T) * incident
    rhs = np.vstack([-incident, -d_incident])

    condition = float(np.linalg.cond(A))
    lu = linalg.lu_factor(A)
    solution = linalg.lu_solve(lu, rhs)
    residual = float(np.linalg.norm(A @ solution - rhs) / np.linalg.norm(rhs))
    if residual > BIE_RESIDUAL_TOL:
        raise NearResonanceError(
            f"Block system residual {residual:.2e} exceeds {BIE_RESIDUAL_TOL:g} at k={k}"
        )
    notes = []
    if condition > BIE_COND_WARN:
        message = f"condition number {condition:.2e} suggests a near-resonant wavenumber k={k}"
        logger.warning(message)
        notes.append(message)
    logger.info(
        f"Boundary integral solve: N_c={n_nodes}, directions={len(directions)}, "
        f"cond={condition:.2e}, residual={residual:.2e}"
    )
    return LayerDensities(
        phi=solution[:n_nodes],
        psi=solution[n_nodes:],
        nodes=t,
        curve=cfg.curve,
        k=k,
        directions=directions,
        residual=residual,
        condition=condition,
        notes=notes,
    )


def scattered_field(densities, points, gradient=False):
    """Evaluate SL_k phi (and optionally its gradient) at points off the boundary.

    Args:
        densities: LayerDensities.
        points: (M, 2) evaluation points, none on the boundary.
        gradient: Also return the gradient, shape (M, Nd, 2).

    Returns:
        (M, Nd) field values, or a tuple (values, gradient).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    k = densities.k
    y = densities.curve.point(densities.nodes)
    delta = points[:, None, :] - y[None, :, :]
    r = np.linalg.norm(delta, axis=-1)
    weighted = densities.phi * densities.weights[:, None]
    values = (0.25j * hankel1(0, k * r)) @ weighted
    if not gradient:
        return values
    kernel = -0.25j * k * hankel1(1, k * r) / r
    grad = np.stack(
        [(kernel * delta[..., 0]) @ weighted, (kernel * delta[..., 1]) @ weighted], axis=-1
    )
    return values, grad


def bie_cauchy_data(cfg, setup, N_f, h=None):
    """Cauchy data (u^s, d_r u^s) on the measurement circle from the boundary-integral solve."""
    setup.check_encloses(cfg.curve)
    h = fd_step(N_f, h)
    densities = solve_bie(cfg, N_f, h=h, directions=setup.directions)
    x = setup.points
    values, grad = scattered_field(densities, x, gradient=True)
    x_hat = setup.directions
    dus = np.einsum("ijd,id->ij", grad, x_hat)
    notes = [f"bie N_f={N_f} h={h}"] + densities.notes
    return CauchyData(us=values, dus=dus, setup=setup, k=cfg.k, notes=notes)


def bie_farfield(densities, J=None):
    """Far-field pattern S_inf phi(x_i) = int exp(-i k x_i . y) phi(y) ds(y).

    Args:
        densities: LayerDensities (columns are incident directions).
        J: Number of equispaced observation directions; defaults to the number of
            incident directions.

    Returns:
        (J, Nd) matrix; a vector when a single direction was solved.
    """
    J = densities.phi.shape[1] if J is None else int(J)
    theta = 2 * np.pi * np.arange(J) / J
    x_hat = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    y = densities.curve.point(densities.nodes)
    kernel = np.exp(-1j * densities.k * x_hat @ y.T)
    F = kernel @ (densities.phi * densities.weights[:, None])
    return F[:, 0] if F.shape[1] == 1 else F


def bie_farfield_matrix(cfg, J, N_f, h=None):
    """J x J far-field matrix for J equispaced incident and observation directions."""
    theta = 2 * np.pi * np.arange(J) / J
    directions = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return bie_farfield(solve_bie(cfg, N_f, h=h, directions=directions), J)


def farfield_error(F_ref, F_bie):
    """Maximum absolute entrywise deviation max |F_ref - F_bie|."""
    F_ref, F_bie = np.asarray(F_ref), np.asarray(F_bie)
    if F_ref.shape != F_bie.shape:
        raise ShapeMismatchError(f"Far-field shapes differ: {F_ref.shape} vs {F_bie.shape}")
    return float(np.max(np.abs(F_ref - F_bie)))
