"""
Module: src.data.io
Purpose: Read and write Cauchy data, indicator grids, eigenvalue tables and run manifests.
Dependencies: pandas, numpy, pyyaml
Output: CSV files (full double precision), 8-bit PGM heatmaps, YAML manifests

Key Concepts:
- CSV files start with one ``# key=value ...`` metadata line, then a pandas table
- Floats are written with ``%.17g`` and parsed back with the round-trip parser, so a
  reload reproduces every bit
- Cauchy data comes in two layouts: one long table, or a pair of J x J matrix files
  (us and dus) with interleaved re/im columns
- Manifests are dumped with sorted keys and no timestamps, so reruns are byte-identical
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd
import yaml

from src.core.errors import ShapeMismatchError
from src.forward.types import CauchyData, MeasurementSetup
from src.imaging.grid import IndicatorGrid

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _write_table(df, path, metadata):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = " ".join(f"{key}={value}" for key, value in sorted(metadata.items()))
    with open(path, "w", newline="") as f:
        f.write(f"# {header}\n")
        df.to_csv(f, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Saved {len(df)} rows to {path}")
    return path


def _read_table(path):
    path = Path(path)
    with open(path, "r") as f:
        first = f.readline().strip()
    metadata = {}
    if first.startswith("#"):
        for item in first.lstrip("#").split():
            key, _, value = item.partition("=")
            metadata[key] = value
    return pd.read_csv(path, comment="#", float_precision="round_trip"), metadata


def save_cauchy_data(data, path):
    """Write Cauchy data in long format (i, j, us_re, us_im[, dus_re, dus_im])."""
    J = data.setup.J
    i, j = np.meshgrid(np.arange(J), np.arange(J), indexing="ij")
    columns = {
        "i": i.ravel(),
        "j": j.ravel(),
        "us_re": data.us.real.ravel(),
        "us_im": data.us.imag.ravel(),
    }
    if data.dus is not None:
        columns["dus_re"] = data.dus.real.ravel()
        columns["dus_im"] = data.dus.imag.ravel()
    metadata = {
        "k": repr(float(data.k)),
        "radius_omega": repr(float(data.setup.radius_omega)),
        "J": J,
    }
    return _write_table(pd.DataFrame(columns), path, metadata)


def load_cauchy_data(path):
    """Read a file written by ``save_cauchy_data``."""
    df, metadata = _read_table(path)
    J = int(metadata["J"])
    if len(df) != J * J:
        raise ShapeMismatchError(f"{path} holds {len(df)} rows, expected {J * J}")
    setup = MeasurementSetup(radius_omega=float(metadata["radius_omega"]), J=J)
    us = (df["us_re"].to_numpy() + 1j * df["us_im"].to_numpy()).reshape(J, J)
    dus = None
    if "dus_re" in df.columns:
        dus = (df["dus_re"].to_numpy() + 1j * df["dus_im"].to_numpy()).reshape(J, J)
    return CauchyData(us=us, dus=dus, setup=setup, k=float(metadata["k"]), notes=[str(path)])


def _matrix_frame(matrix):
    J = matrix.shape[1]
    columns = {}
    for j in range(J):
        columns[f"re_{j}"] = matrix[:, j].real
        columns[f"im_{j}"] = matrix[:, j].imag
    return pd.DataFrame(columns)


def _read_matrix(path):
    df, metadata = _read_table(path)
    J = int(metadata["J"])
    if df.shape != (J, 2 * J):
        raise ShapeMismatchError(f"{path} holds a {df.shape} table, expected ({J}, {2 * J})")
    values = df.to_numpy()
    return values[:, 0::2] + 1j * values[:, 1::2], metadata


def save_cauchy_matrices(data, us_path, dus_path=None):
    """Write us (and dus) as J x J matrices, row i = observation point, re/im column pairs.

    Returns:
        Tuple of written paths (us first).
    """
    metadata = {
        "k": repr(float(data.k)),
        "radius_omega": repr(float(data.setup.radius_omega)),
        "J": data.setup.J,
    }
    paths = [_write_table(_matrix_frame(data.us), us_path, {**metadata, "field": "us"})]
    if data.dus is not None and dus_path is not None:
        paths.append(_write_table(_matrix_frame(data.dus), dus_path, {**metadata, "field": "dus"}))
    return tuple(paths)


def load_cauchy_matrices(us_path, dus_path=None):
    """Read a matrix pair written by ``save_cauchy_matrices``.

    Raises:
        ShapeMismatchError: If a table is not J x 2J or the two headers disagree.
    """
    us, metadata = _read_matrix(us_path)
    dus = None
    if dus_path is not None:
        dus, other = _read_matrix(dus_path)
        if any(other[key] != metadata[key] for key in ("J", "k", "radius_omega")):
            raise ShapeMismatchError(f"{us_path} and {dus_path} describe different runs")
    setup = MeasurementSetup(radius_omega=float(metadata["radius_omega"]), J=int(metadata["J"]))
    return CauchyData(us=us, dus=dus, setup=setup, k=float(metadata["k"]), notes=[str(us_path)])


def save_indicator_grid(grid, path):
    """Write an indicator grid as columns x, y, W, W_nor (row-major, y slowest)."""
    points = grid.points
    normalized = grid.normalized if grid.normalized is not None else np.full(grid.shape, np.nan)
    df = pd.DataFrame(
        {
            "x": points[:, 0],
            "y": points[:, 1],
            "W": grid.values.ravel(),
            "W_nor": normalized.ravel(),
        }
    )
    return _write_table(df, path, {"nx": len(grid.xs), "ny": len(grid.ys), "rho": grid.rho})


def load_indicator_grid(path):
    """Read a file written by ``save_indicator_grid``."""
    df, metadata = _read_table(path)
    nx, ny = int(metadata["nx"]), int(metadata["ny"])
    xs = df["x"].to_numpy()[:nx]
    ys = df["y"].to_numpy()[::nx][:ny]
    normalized = df["W_nor"].to_numpy().reshape(ny, nx)
    rho = None if metadata.get("rho") in (None, "None") else float(metadata["rho"])
    return IndicatorGrid(
        xs=xs,
        ys=ys,
        values=df["W"].to_numpy().reshape(ny, nx),
        normalized=None if np.all(np.isnan(normalized)) else normalized,
        rho=rho,
    )


def save_pgm(grid, path):
    """8-bit binary PGM of the normalized indicator, top row at the largest y."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    image = np.round(255 * np.clip(grid.normalized, 0.0, 1.0)).astype(np.uint8)[::-1]
    ny, nx = image.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{nx} {ny}\n255\n".encode("ascii"))
        f.write(image.tobytes())
    logger.info(f"Saved {nx}x{ny} heatmap to {path}")
    return path


def save_tev_result(result, path, label=None):
    """Write a TevResult as CSV (re, im, residual, method, multiplicity, mode, converged)."""
    metadata = {"method": result.method}
    if label:
        metadata["label"] = label
    return _write_table(result.to_frame(), path, metadata)


def save_table(df, path, **metadata):
    """Write any report table with a metadata line."""
    return _write_table(df, path, metadata)


def write_manifest(path, manifest):
    """Dump a run manifest with sorted keys."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        yaml.safe_dump(manifest, f, sort_keys=True, default_flow_style=False)
    return path
