"""
Module: src.tev.survey
Purpose: Boundary-integral eigenproblem M(k) z = 0 and eigenvalue surveys over several curves.
Dependencies: numpy, pandas, src.forward.bie
Output: TevResult per curve and a side-by-side table of real parts

Key Concepts:
- M(k) reuses the forward operator assembly with complex wavenumbers and the
  interior jump (+1/2 I) in the first block of the second row
- Several contours along the real axis; each eigenvalue is kept only from the contour
  whose center is nearest, so overlaps are not double counted
"""

import logging
from dataclasses import replace

import numpy as np
import pandas as pd

from src.forward.bie import assemble_operators, block_matrix
from src.tev.beyn import beyn_solve
from src.tev.disk import disk_matrix
from src.tev.types import ContourSpec, TevResult

logger = logging.getLogger(__name__)

SURVEY_CENTERS = (0.9, 1.6, 2.3, 3.0, 3.7)
SURVEY_RADIUS = 0.4
SURVEY_N_QUAD = 32
SURVEY_NODES = 120
TABLE_IMAG_CUT = 0.1


def assemble_tev_bie(k, problem):
    """2N x 2N matrix M(k) of the boundary-integral eigenproblem.

    Args:
        k: Complex wavenumber.
        problem: TevProblem.

    Returns:
        Complex (2 N_c, 2 N_c) matrix.
    """
    k = complex(k)
    ops = assemble_operators(problem.curve, k, k * problem.sqrt_n, problem.n_nodes, h=problem.h)
    return block_matrix(ops, complex(problem.mu), complex(problem.gamma), interior_sign=1.0)


def beyn_bie(problem, contour, seed=None):
    """Beyn's method applied to the boundary-integral eigenproblem."""
    kwargs = {} if seed is None else {"seed": seed}
    result = beyn_solve(lambda k: assemble_tev_bie(k, problem), contour, "beyn_bie", **kwargs)
    result.notes.append(f"N_c {problem.n_nodes}")
    return result


def beyn_disk_mode(R, n, mu, gamma, p, contour):
    """Beyn's method applied to the 2x2 mode-p disk matrix."""
    result = beyn_solve(lambda k: disk_matrix(k, p, R, n, mu, gamma), contour, "beyn_det")
    result.modes = [p] * len(result)
    return result


def survey_contours(centers=SURVEY_CENTERS, radius=SURVEY_RADIUS, N_quad=SURVEY_N_QUAD):
    return [ContourSpec(center=c, radius=radius, N_quad=N_quad) for c in centers]


def _merge(results, contours):
    """Keep each eigenvalue from the contour with the nearest center."""
    centers = np.array([complex(c.center) for c in contours])
    eigenvalues, residuals, mults, flags = [], [], [], []
    for index, result in enumerate(results):
        for z, res, m, conv in zip(
            result.eigenvalues, result.residuals, result.multiplicities, result.converged
        ):
            if int(np.argmin(np.abs(centers - z))) != index:
                continue
            eigenvalues.append(z)
            residuals.append(res)
            mults.append(m)
            flags.append(conv)
    return TevResult(
        eigenvalues=eigenvalues,
        residuals=residuals,
        method="beyn_bie",
        multiplicities=mults,
        converged=flags,
    ).sorted()


def tev_survey(problem, curves, contours=None, n_nodes=SURVEY_NODES):
    """Run Beyn's method for every curve over a set of contours.

    Args:
        problem: TevProblem supplying n, mu, gamma and h (its curve is replaced).
        curves: Mapping label -> BoundaryCurve.
        contours: List of ContourSpec (defaults to ``survey_contours()``).
        n_nodes: Collocation nodes per curve.

    Returns:
        Dict label -> TevResult.
    """
    contours = survey_contours() if contours is None else contours
    results = {}
    for label, curve in curves.items():
        per_curve = replace(problem, curve=curve, n_nodes=n_nodes)
        found = []
        for contour in contours:
            logger.info(f"Survey {label}: contour center {complex(contour.center):.4g}")
            found.append(beyn_bie(per_curve, contour))
        results[label] = _merge(found, contours)
        logger.info(f"Survey {label}: {results[label].total_multiplicity} eigenvalues")
    return results


def survey_table(results, rows=None, imag_cut=TABLE_IMAG_CUT):
    """Side-by-side table of eigenvalues with |Im k| < imag_cut, repeated by multiplicity.

    Args:
        results: Dict label -> TevResult.
        rows: Number of rows to keep (all by default).
        imag_cut: Drop eigenvalues with larger imaginary part.

    Returns:
        DataFrame with one complex column per label; missing entries are NaN.
    """
    columns = {}
    for label, result in results.items():
        values = result.expanded()
        values = values[np.abs(values.imag) < imag_cut]
        columns[label] = pd.Series(values[:rows] if rows else values, dtype=complex)
    table = pd.DataFrame(columns)
    table.index = np.arange(1, len(table) + 1)
    return table
