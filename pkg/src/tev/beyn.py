"""
Module: src.tev.beyn
Purpose: Contour-integral eigenvalue solver for holomorphic matrix families M(z).
Dependencies: numpy, scipy.linalg
Output: TevResult with verified eigenvalues inside a circular contour

Key Concepts:
- Seeded complex random block V, trapezoid quadrature of the centered moments
  A_p = (1/2 pi i) int (z - c)^p M(z)^{-1} V dz for p = 0, 1
- Economy SVD of A_0 with a relative rank cut, B = V_0^* A_1 W_0 Sigma_0^{-1}
- Each eigenvalue of B is polished by Newton steps on the smallest singular triplet
  of M(z) and accepted only if sigma_min / sigma_max stays below the residual tolerance
"""

import logging

import numpy as np
from scipy import linalg

from src.core.config import BEYN_SEED, NEWTON_MAX_ITER, NEWTON_STEP, NEWTON_TOL, TEV_RESIDUAL_TOL
from src.core.errors import EllTooSmallError, NearResonanceError
from src.tev.types import TevResult

logger = logging.getLogger(__name__)

SINGULAR_NODE_COND = 1e14
CLUSTER_TOL = 1e-6


def _moments(matrix_fn, contour, V, rotation):
    center = complex(contour.center)
    nodes = contour.nodes(rotation=rotation)
    A0 = np.zeros(V.shape, dtype=complex)
    A1 = np.zeros(V.shape, dtype=complex)
    for z in nodes:
        Mz = matrix_fn(z)
        if np.linalg.cond(Mz) > SINGULAR_NODE_COND:
            raise NearResonanceError(f"M(z) is numerically singular at contour node {z:.6g}")
        X = linalg.lu_solve(linalg.lu_factor(Mz), V)
        A0 += (z - center) * X
        A1 += (z - center) ** 2 * X
    return A0 / len(nodes), A1 / len(nodes)


def smallest_singular_triplet(M):
    """(sigma_min / sigma_max, left vector, right vector, all sigma / sigma_max) of M."""
    U, s, Vh = np.linalg.svd(M)
    return s[-1] / s[0], U[:, -1], Vh[-1].conj(), s / s[0]


def refine_eigenvalue(matrix_fn, z0, contour=None, tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER):
    """Newton iteration z <- z - (y* M x) / (y* M' x) on the smallest singular triplet.

    Returns:
        Tuple (z, converged, residual) with residual = sigma_min / sigma_max at z.
    """
    z = complex(z0)
    converged = False
    for _ in range(max_iter):
        Mz = matrix_fn(z)
        _, y, x, _ = smallest_singular_triplet(Mz)
        dM = (matrix_fn(z + NEWTON_STEP) - matrix_fn(z - NEWTON_STEP)) / (2 * NEWTON_STEP)
        den = y.conj() @ dM @ x
        if den == 0:
            break
        delta = (y.conj() @ Mz @ x) / den
        z -= delta
        if contour is not None and not contour.contains(z, slack=1.0):
            break
        if abs(delta) <= tol * max(1.0, abs(z)):
            converged = True
            break
    residual, _, _, _ = smallest_singular_triplet(matrix_fn(z))
    return z, converged, float(residual)


def _cluster(values):
    groups = []
    for z in sorted(values, key=lambda v: (v.real, v.imag)):
        for group in groups:
            if abs(z - group[0]) <= CLUSTER_TOL * max(1.0, abs(z)):
                group.append(z)
                break
        else:
            groups.append([z])
    return groups


def beyn_solve(matrix_fn, contour, method="beyn_bie", seed=BEYN_SEED, refine=True):
    """Eigenvalues of M(z) x = 0 inside a circular contour.

    Args:
        matrix_fn: Callable z -> square complex matrix, holomorphic inside the contour.
        contour: ContourSpec (center, radius, N_quad, ell, rank_tol).
        method: Label stored in the result (``beyn_bie`` or ``beyn_det``).
        seed: Seed of the random block V.
        refine: Polish and verify each eigenvalue on M(z).

    Returns:
        TevResult with distinct eigenvalues and multiplicities.

    Raises:
        EllTooSmallError: If the numerical rank equals ell while ell < dim M.
        NearResonanceError: If M is singular at contour nodes even after rotating them.
    """
    center = complex(contour.center)
    dim = matrix_fn(center).shape[0]
    ell = min(contour.ell, dim)
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((dim, ell)) + 1j * rng.standard_normal((dim, ell))

    try:
        A0, A1 = _moments(matrix_fn, contour, V, rotation=0.0)
    except NearResonanceError as exc:
        logger.warning(f"{exc}; retrying with contour nodes rotated by half a step")
        A0, A1 = _moments(matrix_fn, contour, V, rotation=0.5)

    U, s, Wh = linalg.svd(A0, full_matrices=False)
    if s[0] == 0:
        return TevResult(eigenvalues=[], residuals=[], method=method)
    rank = int(np.sum(s > contour.rank_tol * s[0]))
    if rank == ell and ell < dim:
        logger.error(f"Numerical rank {rank} reached the column count ell={ell}")
        raise EllTooSmallError(
            f"Rank of the moment matrix equals ell={ell}; increase ell to capture every "
            f"eigenvalue inside |z-{center:.4g}|<={contour.radius:g}"
        )
    B = U[:, :rank].conj().T @ A1 @ Wh[:rank].conj().T / s[:rank][None, :]
    candidates = center + linalg.eigvals(B)
    candidates = candidates[contour.contains(candidates, slack=1e-8)]
    logger.info(
        f"Contour |z-{center:.4g}|<={contour.radius:g}: rank {rank}, {len(candidates)} candidates"
    )

    if not refine:
        residuals = [smallest_singular_triplet(matrix_fn(z))[0] for z in candidates]
        return TevResult(eigenvalues=candidates, residuals=residuals, method=method).sorted()

    accepted = {}
    for z0 in candidates:
        z, converged, residual = refine_eigenvalue(matrix_fn, z0, contour)
        if residual > TEV_RESIDUAL_TOL or not contour.contains(z):
            logger.debug(f"Rejected candidate {z0:.6g} (residual {residual:.2e})")
            continue
        accepted[z] = (converged, residual)

    eigenvalues, residuals, mults, flags = [], [], [], []
    for group in _cluster(list(accepted)):
        z = group[0]
        _, _, _, ratios = smallest_singular_triplet(matrix_fn(z))
        nullity = int(np.sum(ratios <= TEV_RESIDUAL_TOL))
        eigenvalues.append(z)
        residuals.append(accepted[z][1])
        mults.append(max(1, nullity))
        flags.append(accepted[z][0])
    return TevResult(
        eigenvalues=eigenvalues,
        residuals=residuals,
        method=method,
        multiplicities=mults,
        converged=flags,
        notes=[f"rank {rank}", f"N_quad {contour.N_quad}", f"ell {ell}"],
    ).sorted()
