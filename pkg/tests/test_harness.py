"""Tests for experiment configuration, end-to-end runs and the CLI."""

import logging
from pathlib import Path

import numpy as np
import pytest

from src.cli import EXIT_INVALID, EXIT_OK, main
from src.core.errors import ConfigValidationError, ShapeMismatchError
from src.harness import (
    ExperimentConfig,
    apply_overrides,
    generate_data,
    parse_complex,
    parse_real,
    reconstruct,
    run_forward,
    run_reconstruct,
    run_tables,
    strictly_decreasing,
)

EXPERIMENTS = Path(__file__).resolve().parent.parent / "experiments"


def load(name, *overrides):
    return ExperimentConfig.from_yaml(EXPERIMENTS / f"{name}.yaml", list(overrides))


def test_parse_real():
    """Test multiples of pi and plain numbers."""
    assert parse_real("5pi") == pytest.approx(5 * np.pi)
    assert parse_real("3*pi/2") == pytest.approx(1.5 * np.pi)
    assert parse_real("pi") == pytest.approx(np.pi)
    assert parse_real("2.5pi") == pytest.approx(2.5 * np.pi)
    assert parse_real(2) == 2.0
    with pytest.raises(ValueError):
        parse_real(True)


def test_parse_complex():
    """Test 'i' and 'j' suffixes."""
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("0.9-2j") == 0.9 - 2j
    assert parse_complex(4) == 4 + 0j


def test_apply_overrides():
    """Test dotted keys create nested entries and values are parsed as YAML."""
    raw = {"noise": {"delta": 0.05}}
    result = apply_overrides(raw, ["noise.delta=0.1", "imaging.far=true", "bie.N_f=20"])

    assert result == {"noise": {"delta": 0.1}, "imaging": {"far": True}, "bie": {"N_f": 20}}
    assert raw["noise"]["delta"] == 0.05
    with pytest.raises(ConfigValidationError, match="section.key=value"):
        apply_overrides(raw, ["novalue"])


@pytest.mark.parametrize("path", sorted(EXPERIMENTS.glob("*.yaml")), ids=lambda p: p.stem)
def test_experiment_files_validate(path):
    """Test every shipped experiment file loads."""
    config = ExperimentConfig.from_yaml(path)
    assert config.name == path.stem
    assert config.k > 0


def test_experiment_values():
    """Test parsed values of the k = 5pi disk experiment."""
    config = load("ex1a_k5pi")
    assert config.solver == "sov"
    assert config.k == pytest.approx(5 * np.pi)
    assert config.scatterer.n == 5
    assert config.J == 32
    assert config.delta == 0.05
    assert config.grid_size == 150


def test_field_errors_reported_together():
    """Test several invalid fields are collected in one error."""
    raw = {
        "solver": "sov",
        "k": -1,
        "scatterer": {"curve": "circle", "params": [0.5], "n": 2, "mu": 1, "gamma": 1},
        "setup": {"radius_omega": 1.0, "J": 0},
        "noise": {"delta": 1.5},
        "colour": "blue",
    }
    with pytest.raises(ConfigValidationError) as info:
        ExperimentConfig.from_dict(raw)
    assert {"k", "setup.J", "noise.delta", "colour"} <= set(info.value.errors)


def test_series_solver_rejects_ellipse():
    """Test the sov solver refuses non-disk scatterers at validation time."""
    with pytest.raises(ConfigValidationError) as info:
        load("ex7_ellipse_delta05", "solver=sov")
    assert "solver" in info.value.errors


def test_scatterer_outside_omega_rejected():
    """Test a measurement circle inside the scatterer is reported."""
    with pytest.raises(ConfigValidationError) as info:
        load("ex1a_k5pi", "setup.radius_omega=0.3")
    assert "scatterer" in info.value.errors


def test_missing_file():
    """Test unreadable files raise ConfigValidationError."""
    with pytest.raises(ConfigValidationError, match="cannot read"):
        ExperimentConfig.from_yaml(EXPERIMENTS / "missing.yaml")


def test_zero_noise_returns_exact_data():
    """Test delta = 0 leaves the forward data untouched."""
    config = load("ex1a_k5pi", "noise.delta=0")
    data = generate_data(config)
    exact = config.forward_model().cauchy_data(config.setup())
    np.testing.assert_array_equal(data.us, exact.us)
    np.testing.assert_array_equal(data.dus, exact.dus)


def test_series_truncation_adapts_at_high_wavenumber(caplog):
    """Test the k = 5pi experiments raise the series order past the tail tolerance."""
    config = load("ex1a_k5pi")
    assert config.adaptive
    assert config.forward_model().adaptive
    with caplog.at_level(logging.WARNING, logger="src.forward.sov"):
        generate_data(config)
    assert "Series tail" not in caplog.text


def test_many_directions_shape():
    """Test J = 64 data has 64 x 64 blocks."""
    data = generate_data(load("ex1a_k3pi2", "setup.J=64"))
    assert data.us.shape == (64, 64)
    assert data.dus.shape == (64, 64)


def test_forward_reruns_are_byte_identical(tmp_path):
    """Test two forward runs with the same seed write identical files."""
    config = load("ex1a_k5pi", f"output.dir={tmp_path}")
    first = {key: path.read_bytes() for key, path in run_forward(config).items()}
    second = {key: path.read_bytes() for key, path in run_forward(config).items()}
    assert first == second


def test_reconstruct_from_saved_data(tmp_path):
    """Test reconstruction from a written data file matches in-memory reconstruction."""
    config = load("ex1a_k5pi", f"output.dir={tmp_path}", "imaging.size=21")
    files = run_forward(config)
    summary = run_reconstruct(config, data_path=files["cauchy"])
    _, direct = reconstruct(config)

    assert summary["argmax_x"] == pytest.approx(direct["argmax_x"])
    assert summary["argmax_y"] == pytest.approx(direct["argmax_y"])
    assert (tmp_path / "ex1a_k5pi_indicator.pgm").exists()
    assert (tmp_path / "ex1a_k5pi_reconstruct.yaml").exists()


def test_direction_count_mismatch(tmp_path):
    """Test data recorded with another J is refused."""
    data = generate_data(load("ex1a_k5pi", "setup.J=16"))
    with pytest.raises(ShapeMismatchError, match="J=16"):
        reconstruct(load("ex1a_k5pi", "imaging.size=11"), data)


@pytest.mark.parametrize("delta", ["0", "0.05"])
def test_disk_reconstruction_fidelity(delta):
    """Test the k = 5pi disk indicator peaks inside D with little mass outside 1.5 D."""
    config = load("ex1a_k5pi", f"noise.delta={delta}")
    _, summary = reconstruct(config)
    assert config.curve().contains(np.array([summary["argmax_x"], summary["argmax_y"]]))
    assert summary["mean_outside"] <= 0.2


def test_peak_inside_disk_at_high_noise():
    """Test 20% noise still places the peak inside the disk."""
    _, summary = reconstruct(load("ex1b_delta20", "imaging.size=41"))
    assert np.hypot(summary["argmax_x"], summary["argmax_y"]) < 0.5


def test_indicator_stable_under_noise():
    """Test 5% noise changes W and W_nor by a small fraction of the clean peak."""
    clean, _ = reconstruct(load("ex1a_k5pi", "imaging.size=41", "noise.delta=0"))
    noisy, _ = reconstruct(load("ex1a_k5pi", "imaging.size=41"))
    assert np.max(np.abs(noisy.values - clean.values)) <= 0.05 * np.max(clean.values)
    assert np.max(np.abs(noisy.normalized - clean.normalized)) <= 0.1


def test_strictly_decreasing():
    """Test equal or rising neighbours fail the check."""
    assert strictly_decreasing([0.17, 0.026, 0.005, 0.0014])
    assert not strictly_decreasing([0.17, 0.2, 0.005])
    assert not strictly_decreasing([4.4e-4, 4.4e-4, 4.4e-4])


def test_cli_forward(tmp_path):
    """Test the forward command exits with 0 and writes the data file."""
    code = main(["forward", "-c", str(EXPERIMENTS / "ex1a_k5pi.yaml"), "-o", str(tmp_path)])
    assert code == EXIT_OK
    assert (tmp_path / "ex1a_k5pi_cauchy.csv").exists()
    assert (tmp_path / "ex1a_k5pi_us.csv").exists()
    assert (tmp_path / "ex1a_k5pi_dus.csv").exists()
    assert (tmp_path / "ex1a_k5pi_forward_manifest.yaml").exists()


def test_cli_invalid_config(tmp_path, capsys):
    """Test invalid fields give exit code 2 and name the field."""
    path = str(EXPERIMENTS / "ex1a_k5pi.yaml")
    code = main(["forward", "-c", path, "-o", str(tmp_path), "--set", "k=-1"])
    assert code == EXIT_INVALID
    assert "k: must be positive" in capsys.readouterr().err


@pytest.mark.slow
@pytest.mark.parametrize("name", ["ex6_disk_delta05", "ex7_ellipse_delta05", "ex8_kite_delta05"])
def test_integral_equation_reconstructions(name):
    """Test the peak lies inside the scatterer and little mass sits far outside."""
    config = load(name, "imaging.size=60")
    _, summary = reconstruct(config)
    assert config.curve().contains(np.array([summary["argmax_x"], summary["argmax_y"]]))
    assert summary["mean_outside"] <= 0.2


@pytest.mark.slow
def test_table1_passes():
    """Test series and Beyn eigenvalues of the reference disk."""
    report = run_tables("table1")
    assert report.passed, report.frame


@pytest.mark.slow
def test_table2_passes():
    """Test lowest eigenvalues of the disk and ellipses and their ordering."""
    report = run_tables("table2")
    assert report.passed, report.frame
    assert report.details["first_ok"] and report.details["trend_ok"]
    first = report.frame.iloc[0]
    assert first["disk"] < first["ellipse_0.9"] < first["ellipse_0.8"]


@pytest.mark.slow
def test_table3_passes():
    """Test far-field errors of the integral-equation solver at k = 2."""
    report = run_tables("table3")
    assert report.passed, report.frame
    assert report.details["decreasing"]
    assert report.details["bound_40"] and report.details["bound_80"]
