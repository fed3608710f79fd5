"""Harness subpackage: experiment files, end-to-end runs and table reproductions."""

from .config import ExperimentConfig, apply_overrides, parse_complex, parse_real
from .runner import (
    generate_data,
    reconstruct,
    run_forward,
    run_reconstruct,
    run_tev_bie,
    run_tev_disk,
)
from .tables import TABLES, TableReport, run_tables, run_validate, strictly_decreasing

__all__ = [
    "TABLES",
    "ExperimentConfig",
    "TableReport",
    "apply_overrides",
    "generate_data",
    "parse_complex",
    "parse_real",
    "reconstruct",
    "run_forward",
    "run_reconstruct",
    "run_tables",
    "run_tev_bie",
    "run_tev_disk",
    "run_validate",
    "strictly_decreasing",
]
