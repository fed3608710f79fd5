"""
Module: src.tev
Purpose: Transmission eigenvalues by the disk determinant and by Beyn's contour method.
Dependencies: numpy, scipy, pandas
Output: TevResult objects (CSV-serializable through ``to_frame``)
"""

from .beyn import beyn_solve, refine_eigenvalue
from .disk import column_scales, disk_determinant, disk_matrix, find_disk_tevs, winding_count
from .survey import (
    assemble_tev_bie,
    beyn_bie,
    beyn_disk_mode,
    survey_contours,
    survey_table,
    tev_survey,
)
from .types import ContourSpec, TevProblem, TevResult

__all__ = [
    "ContourSpec",
    "TevProblem",
    "TevResult",
    "assemble_tev_bie",
    "beyn_bie",
    "beyn_disk_mode",
    "beyn_solve",
    "column_scales",
    "disk_determinant",
    "disk_matrix",
    "find_disk_tevs",
    "refine_eigenvalue",
    "survey_contours",
    "survey_table",
    "tev_survey",
]
