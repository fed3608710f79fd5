"""
Module: src.imaging
Purpose: Direct sampling reconstruction from Cauchy data.
Dependencies: numpy
Output: IndicatorGrid objects (raw and normalized indicator values)

Key Concepts:
- indicator: W(z), its far variant and the interior cross-check form
- grid: sampling grids, normalization and reconstruction summaries
- noise: seeded multiplicative complex noise
"""

from .grid import IndicatorGrid, make_grid, normalize, reconstruction_summary
from .indicator import (
    dsm_indicator,
    dsm_indicator_far,
    dsm_indicator_interior_form,
    im_phi,
    im_phi_normal_deriv,
    indicator_at_points,
    interior_form_at_points,
)
from .noise import NoiseModel, add_noise, noise_matrix, noisy_cauchy_data

__all__ = [
    "IndicatorGrid",
    "NoiseModel",
    "add_noise",
    "dsm_indicator",
    "dsm_indicator_far",
    "dsm_indicator_interior_form",
    "im_phi",
    "im_phi_normal_deriv",
    "indicator_at_points",
    "interior_form_at_points",
    "make_grid",
    "noise_matrix",
    "noisy_cauchy_data",
    "normalize",
    "reconstruction_summary",
]
