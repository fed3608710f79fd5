"""Sampling grids for the indicator, normalization and reconstruction summaries."""

import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from src.core.config import GRID_SIZE, GRID_WINDOW, RHO
from src.core.errors import InvalidParameterError, NormalizationError

logger = logging.getLogger(__name__)

DILATION = 1.5


@dataclass(frozen=True)
class IndicatorGrid:
    """Indicator values on a tensor grid.

    Attributes:
        xs: Grid abscissae, shape (nx,).
        ys: Grid ordinates, shape (ny,).
        values: W(z), shape (ny, nx) with row i at y = ys[i].
        normalized: (W / max W)^rho, or None before normalization.
        rho: Exponent used for ``normalized``.
    """

    xs: np.ndarray
    ys: np.ndarray
    values: Optional[np.ndarray] = None
    normalized: Optional[np.ndarray] = None
    rho: Optional[float] = None

    @property
    def shape(self):
        return (len(self.ys), len(self.xs))

    @property
    def points(self):
        """Flattened (ny*nx, 2) sampling points in row-major order."""
        X, Y = np.meshgrid(self.xs, self.ys)
        return np.stack([X.ravel(), Y.ravel()], axis=-1)

    def with_values(self, values):
        return replace(self, values=np.asarray(values, dtype=float).reshape(self.shape))


def make_grid(size=GRID_SIZE, window=GRID_WINDOW):
    """Uniform size x size grid over window = (xmin, xmax, ymin, ymax)."""
    if size < 1:
        raise InvalidParameterError(f"Grid size must be positive, got {size}")
    xmin, xmax, ymin, ymax = window
    if not (xmax > xmin and ymax > ymin):
        raise InvalidParameterError(f"Degenerate grid window {window}")
    return IndicatorGrid(xs=np.linspace(xmin, xmax, size), ys=np.linspace(ymin, ymax, size))


def normalize(grid, rho=RHO):
    """Return a copy with normalized = (values / max values)^rho.

    Raises:
        InvalidParameterError: If rho <= 0.
        NormalizationError: If the grid has no values or they are all zero.
    """
    if rho <= 0:
        raise InvalidParameterError(f"Normalization exponent must be positive, got rho={rho}")
    if grid.values is None or grid.values.size == 0:
        raise NormalizationError("Grid holds no indicator values")
    peak = float(np.max(grid.values))
    if not peak > 0:
        logger.error("Cannot normalize an indicator that vanishes on the whole grid")
        raise NormalizationError("Indicator is identically zero; nothing to normalize")
    return replace(grid, normalized=(grid.values / peak) ** rho, rho=float(rho))


def reconstruction_summary(grid, curve=None):
    """Peak location and mass-concentration scores of a normalized indicator.

    Args:
        grid: Normalized IndicatorGrid.
        curve: Optional true boundary for the inside / outside scores.

    Returns:
        Dict with ``argmax_x``, ``argmax_y``, ``peak`` and, when ``curve`` is given,
        ``mass_inside`` (share of normalized mass inside D) and ``mean_outside``
        (mean normalized value outside the 1.5x dilation of D).
    """
    if grid.normalized is None:
        grid = normalize(grid)
    iy, ix = np.unravel_index(int(np.argmax(grid.values)), grid.shape)
    summary = {
        "argmax_x": float(grid.xs[ix]),
        "argmax_y": float(grid.ys[iy]),
        "peak": float(grid.values[iy, ix]),
    }
    if curve is not None:
        points = grid.points.reshape(grid.shape + (2,))
        inside = curve.contains(points)
        outside = ~curve.contains(points, scale=DILATION)
        total = float(np.sum(grid.normalized))
        summary["mass_inside"] = float(np.sum(grid.normalized[inside]) / total)
        summary["mean_outside"] = (
            float(np.mean(grid.normalized[outside])) if np.any(outside) else 0.0
        )
    return summary
