"""
Module: src.forward
Purpose: Forward scattering solvers for the delaminated transmission problem.
Dependencies: numpy, scipy
Output: CauchyData on the measurement circle and far-field matrices

Key Concepts:
- sov: exact series for centered disks
- born: small-region approximation
- bie: boundary integral equations for smooth curves
- model: ForwardModel interface over the three
"""

from .bie import (
    BieOperatorSet,
    LayerDensities,
    assemble_normal_derivative,
    assemble_operators,
    assemble_single_layer,
    bie_cauchy_data,
    bie_farfield,
    bie_farfield_matrix,
    block_matrix,
    farfield_error,
    fd_step,
    scattered_field,
    solve_bie,
    tangential_second_derivative,
)
from .born import SmallRegionSet, born_cauchy_data, green2d, lb_plane_wave
from .model import BornModel, BoundaryIntegralModel, ForwardModel, SeriesModel
from .sov import (
    choose_truncation,
    jacobi_anger_residual,
    sov_boundary_source,
    sov_cauchy_data,
    sov_farfield,
    sov_fields,
    sov_mode_coefficients,
)
from .types import CauchyData, MeasurementSetup, ScattererConfig

__all__ = [
    "BieOperatorSet",
    "BornModel",
    "BoundaryIntegralModel",
    "CauchyData",
    "ForwardModel",
    "LayerDensities",
    "MeasurementSetup",
    "ScattererConfig",
    "SeriesModel",
    "SmallRegionSet",
    "assemble_normal_derivative",
    "assemble_operators",
    "assemble_single_layer",
    "bie_cauchy_data",
    "bie_farfield",
    "bie_farfield_matrix",
    "block_matrix",
    "born_cauchy_data",
    "choose_truncation",
    "farfield_error",
    "fd_step",
    "green2d",
    "jacobi_anger_residual",
    "lb_plane_wave",
    "scattered_field",
    "solve_bie",
    "sov_boundary_source",
    "sov_cauchy_data",
    "sov_farfield",
    "sov_fields",
    "sov_mode_coefficients",
    "tangential_second_derivative",
]
