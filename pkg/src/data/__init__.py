"""Data subpackage: file formats for measurements, indicators and eigenvalue tables."""

from .io import (
    load_cauchy_data,
    load_cauchy_matrices,
    load_indicator_grid,
    save_cauchy_data,
    save_cauchy_matrices,
    save_indicator_grid,
    save_pgm,
    save_table,
    save_tev_result,
    write_manifest,
)

__all__ = [
    "load_cauchy_data",
    "load_cauchy_matrices",
    "load_indicator_grid",
    "save_cauchy_data",
    "save_cauchy_matrices",
    "save_indicator_grid",
    "save_pgm",
    "save_table",
    "save_tev_result",
    "write_manifest",
]
