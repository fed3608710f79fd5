"""
Module: src.harness.runner
Purpose: Run experiments end to end: synthetic data, reconstruction and eigenvalue searches.
Dependencies: numpy, pandas, pyyaml (through src.data)
Output: CSV data files, PGM heatmaps, YAML manifests and summaries under the output directory

Key Concepts:
- Every run writes a manifest echoing the fully resolved configuration, the package
  version and the noise seed; reruns with the same inputs are byte-identical
- Noise is applied once, right after the forward solve, from the configured seed
- The far variant of the indicator uses u^s only (d_r u^s replaced by i k u^s)
"""

import logging
from pathlib import Path

from src import __version__
from src.core.errors import ShapeMismatchError, WrongSolverError
from src.data import (
    load_cauchy_data,
    save_cauchy_data,
    save_cauchy_matrices,
    save_indicator_grid,
    save_pgm,
    save_tev_result,
    write_manifest,
)
from src.imaging import (
    dsm_indicator,
    dsm_indicator_far,
    noisy_cauchy_data,
    normalize,
    reconstruction_summary,
)
from src.tev import beyn_bie, find_disk_tevs

logger = logging.getLogger(__name__)


def _output_dir(config, output_dir=None):
    path = Path(output_dir if output_dir is not None else config.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _manifest(config, command, files, extra=None):
    manifest = {
        "command": command,
        "version": __version__,
        "seed": config.seed,
        "config": config.to_dict(),
        "files": {key: str(Path(value).name) for key, value in files.items()},
    }
    if extra:
        manifest.update(extra)
    return manifest


def generate_data(config):
    """Synthetic Cauchy data for the configured solver, with noise applied.

    Args:
        config: ExperimentConfig.

    Returns:
        CauchyData
    """
    model = config.forward_model()
    logger.info(f"{config.name}: forward solve with the {model.name} solver, k={config.k:.6g}")
    data = model.cauchy_data(config.setup())
    return noisy_cauchy_data(data, config.noise_model())


def run_forward(config, output_dir=None):
    """Write the Cauchy data and ``<name>_forward_manifest.yaml``.

    The data goes to ``<name>_cauchy.csv`` (long table, read back by ``reconstruct``) and to
    the matrix pair ``<name>_us.csv`` / ``<name>_dus.csv``.

    Returns:
        Dict of output paths.
    """
    out = _output_dir(config, output_dir)
    data = generate_data(config)
    files = {"cauchy": save_cauchy_data(data, out / f"{config.name}_cauchy.csv")}
    matrices = save_cauchy_matrices(
        data, out / f"{config.name}_us.csv", out / f"{config.name}_dus.csv"
    )
    files.update(zip(("us", "dus"), matrices))
    manifest = _manifest(config, "forward", files, {"notes": list(data.notes)})
    files["manifest"] = write_manifest(out / f"{config.name}_forward_manifest.yaml", manifest)
    logger.info(f"{config.name}: forward outputs written to {out}")
    return files


def reconstruct(config, data=None):
    """Indicator grid (normalized) and its summary, without touching the disk.

    Args:
        config: ExperimentConfig.
        data: CauchyData; generated from the config when omitted.

    Returns:
        Tuple (IndicatorGrid, summary dict).

    Raises:
        ShapeMismatchError: If the data was recorded with a different J.
    """
    if data is None:
        data = generate_data(config)
    if data.setup.J != config.J:
        logger.error(f"Data has J={data.setup.J} but the configuration asks for J={config.J}")
        raise ShapeMismatchError(f"Data J={data.setup.J} does not match config J={config.J}")
    grid = config.grid()
    grid = dsm_indicator_far(data, grid) if config.far else dsm_indicator(data, grid)
    grid = normalize(grid, config.rho)
    summary = reconstruction_summary(grid, config.curve())
    logger.info(
        f"{config.name}: peak at ({summary['argmax_x']:.3f}, {summary['argmax_y']:.3f})"
    )
    return grid, summary


def run_reconstruct(config, data_path=None, output_dir=None):
    """Write the indicator CSV, a PGM heatmap and a YAML summary with manifest.

    Args:
        config: ExperimentConfig.
        data_path: CSV written by ``run_forward``; data is regenerated when omitted.
        output_dir: Override of ``config.output_dir``.

    Returns:
        Summary dict (argmax location, peak and the inside / outside scores).
    """
    out = _output_dir(config, output_dir)
    data = load_cauchy_data(data_path) if data_path is not None else None
    grid, summary = reconstruct(config, data)
    files = {
        "indicator": save_indicator_grid(grid, out / f"{config.name}_indicator.csv"),
        "heatmap": save_pgm(grid, out / f"{config.name}_indicator.pgm"),
    }
    extra = {"summary": summary, "data": str(data_path) if data_path else "generated"}
    manifest = _manifest(config, "reconstruct", files, extra)
    write_manifest(out / f"{config.name}_reconstruct.yaml", manifest)
    return summary


def run_tev_disk(config, output_dir=None):
    """Series eigenvalues of the configured disk inside the configured contour."""
    curve = config.curve()
    if curve is None or curve.kind != "circle":
        raise WrongSolverError("tev-disk needs a circular scatterer")
    scat = config.scatterer
    result = find_disk_tevs(
        curve.params[2], scat.n, scat.mu, scat.gamma, config.contour(), config.tev.p_max
    )
    out = _output_dir(config, output_dir)
    path = save_tev_result(result, out / f"{config.name}_tev_disk.csv", label=config.name)
    write_manifest(
        out / f"{config.name}_tev_disk.yaml", _manifest(config, "tev-disk", {"eigenvalues": path})
    )
    return result


def run_tev_bie(config, output_dir=None):
    """Beyn eigenvalues of the boundary-integral eigenproblem for the configured curve."""
    result = beyn_bie(config.tev_problem(), config.contour())
    out = _output_dir(config, output_dir)
    path = save_tev_result(result, out / f"{config.name}_tev_bie.csv", label=config.name)
    write_manifest(
        out / f"{config.name}_tev_bie.yaml", _manifest(config, "tev-bie", {"eigenvalues": path})
    )
    return result
