"""Command-line interface for the delaminated scattering workbench."""

import argparse
import logging
import sys
from pathlib import Path

import pandas as pd

from src.core.config import DATA_DIR
from src.core.errors import DelamError
from src.data import save_table
from src.harness import (
    TABLES,
    ExperimentConfig,
    run_forward,
    run_reconstruct,
    run_tables,
    run_tev_bie,
    run_tev_disk,
    run_validate,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_ACCEPTANCE = 3


def _experiment_parent():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", "-c", required=True, help="Experiment YAML file")
    parent.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="Override a config field (repeatable)",
    )
    parent.add_argument("--seed", type=int, default=None, help="Noise seed")
    parent.add_argument("--delta", type=float, default=None, help="Relative noise level")
    return parent


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", "-o", default=None, help="Directory for output files")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(
        description="Forward solvers, direct sampling and transmission eigenvalues for "
        "scatterers with a delaminated boundary layer",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    experiment = _experiment_parent()

    # forward
    subparsers.add_parser(
        "forward", parents=[common, experiment], help="Generate Cauchy data for an experiment"
    )

    # reconstruct
    reconstruct_parser = subparsers.add_parser(
        "reconstruct", parents=[common, experiment], help="Direct sampling reconstruction"
    )
    reconstruct_parser.add_argument(
        "--data", default=None, help="Cauchy data CSV from 'forward' (regenerated if omitted)"
    )

    # eigenvalues
    subparsers.add_parser(
        "tev-disk", parents=[common, experiment], help="Disk eigenvalues from the determinant"
    )
    subparsers.add_parser(
        "tev-bie", parents=[common, experiment], help="Eigenvalues by Beyn's contour method"
    )

    # tables
    tables_parser = subparsers.add_parser(
        "tables", parents=[common], help="Reproduce the eigenvalue and convergence tables"
    )
    tables_parser.add_argument(
        "which", nargs="+", choices=sorted(TABLES) + ["all"], help="Tables to run"
    )

    # validate
    subparsers.add_parser(
        "validate", parents=[common], help="Special-function lattice and no-contrast checks"
    )
    return parser


def _load_experiment(args):
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"noise.seed={args.seed}")
    if args.delta is not None:
        overrides.append(f"noise.delta={args.delta}")
    if args.output_dir is not None:
        overrides.append(f"output.dir={args.output_dir}")
    return ExperimentConfig.from_yaml(args.config, overrides)


def _report(report, output_dir):
    path = save_table(report.frame, Path(output_dir) / f"{report.name}.csv", passed=report.passed)
    with pd.option_context("display.width", 160, "display.max_columns", 20):
        print(report.frame.to_string())
    status = "PASS" if report.passed else "FAIL"
    print(f"\n{report.name}: {status} ({path})")
    return report.passed


def _dispatch(args):
    if args.command == "forward":
        config = _load_experiment(args)
        files = run_forward(config)
        print(f"Cauchy data written to {files['cauchy']}")
        return EXIT_OK

    if args.command == "reconstruct":
        config = _load_experiment(args)
        summary = run_reconstruct(config, data_path=args.data)
        for key, value in summary.items():
            print(f"{key}: {value:.6g}")
        return EXIT_OK

    if args.command in ("tev-disk", "tev-bie"):
        config = _load_experiment(args)
        run = run_tev_disk if args.command == "tev-disk" else run_tev_bie
        result = run(config)
        print(result.to_frame().to_string())
        return EXIT_OK

    output_dir = args.output_dir or DATA_DIR
    if args.command == "tables":
        names = sorted(TABLES) if "all" in args.which else args.which
        passed = [_report(run_tables(name), output_dir) for name in names]
        return EXIT_OK if all(passed) else EXIT_ACCEPTANCE

    if args.command == "validate":
        return EXIT_OK if _report(run_validate(), output_dir) else EXIT_ACCEPTANCE
    return EXIT_INVALID


def main(argv=None):
    """Parse arguments, run the command and return the process exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        return _dispatch(args)
    except DelamError as exc:
        logger.error(str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
