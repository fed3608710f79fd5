"""
Module: src.harness.config
Purpose: Parse and validate experiment files (YAML) into an ExperimentConfig.
Dependencies: pyyaml, numpy, src.core.config
Output: ExperimentConfig with builders for the solver objects it describes

Key Concepts:
- One YAML file per experiment, nested sections (scatterer, setup, noise, imaging, tev)
- Keys missing from an experiment fall back to the defaults in config.yaml
- ``--set section.key=value`` overrides are applied to the raw mapping before validation
- Every problem is collected under its dotted field name and raised at once as
  ConfigValidationError
"""

import copy
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import yaml

from src.core.config import (
    BEYN_ELL,
    BEYN_N_QUAD,
    BEYN_RANK_TOL,
    BIE_FD_STEP,
    DATA_DIR,
    GRID_SIZE,
    GRID_WINDOW,
    NOISE_NORM_KIND,
    NOISE_SEED,
    RHO,
    SOV_ADAPTIVE,
    SOV_TRUNCATION,
)
from src.core.errors import ConfigValidationError, DelamError
from src.forward import (
    BornModel,
    BoundaryIntegralModel,
    MeasurementSetup,
    ScattererConfig,
    SeriesModel,
    SmallRegionSet,
    fd_step,
)
from src.geometry import make_curve
from src.imaging import NoiseModel, make_grid
from src.imaging.noise import NORM_KINDS
from src.tev import ContourSpec, TevProblem

logger = logging.getLogger(__name__)

SOLVERS = ("sov", "born", "bie")
SECTIONS = ("scatterer", "setup", "noise", "imaging", "tev", "bie", "sov", "output")

_PI_PATTERN = re.compile(r"^([0-9.eE+-]*)\s*\*?\s*pi(?:\s*/\s*([0-9.eE+-]+))?$")


def parse_real(value):
    """Float from a number or a string such as ``5pi``, ``3*pi/2`` or ``pi``."""
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().replace(" ", "")
    match = _PI_PATTERN.match(text)
    if match:
        factor = float(match.group(1)) if match.group(1) not in ("", "+", "-") else 1.0
        if match.group(1) == "-":
            factor = -1.0
        divisor = float(match.group(2)) if match.group(2) else 1.0
        return factor * np.pi / divisor
    return float(text)


def parse_complex(value):
    """Complex from a number or a string such as ``1+2i`` or ``0.9-2j``."""
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    return complex(str(value).strip().replace(" ", "").replace("i", "j"))


def apply_overrides(raw, overrides):
    """Return a copy of ``raw`` with ``section.key=value`` overrides applied.

    Values are parsed as YAML, so ``--set imaging.far=true`` gives a bool and
    ``--set scatterer.params=[0.5]`` a list.

    Raises:
        ConfigValidationError: If an override is not of the form ``dotted.key=value``.
    """
    raw = copy.deepcopy(raw or {})
    errors = {}
    for item in overrides or ():
        key, sep, text = item.partition("=")
        key = key.strip()
        if not sep or not key:
            errors[item] = "override must look like section.key=value"
            continue
        target = raw
        parts = key.split(".")
        for part in parts[:-1]:
            node = target.get(part)
            if not isinstance(node, dict):
                node = {}
                target[part] = node
            target = node
        target[parts[-1]] = yaml.safe_load(text)
    if errors:
        raise ConfigValidationError(errors)
    return raw


@dataclass(frozen=True)
class ScattererSpec:
    """Scatterer section: one smooth curve, or small disks for the Born solver."""

    kind: Optional[str]
    params: Tuple[float, ...]
    n: complex
    mu: complex
    gamma: complex
    enforce_signs: bool = False
    centers: Tuple[Tuple[float, float], ...] = ()
    r0: Optional[float] = None


@dataclass(frozen=True)
class TevSpec:
    """Eigenvalue section: search contour, Beyn parameters and discretization."""

    center: complex = 1.25
    radius: float = 0.35
    N_quad: int = BEYN_N_QUAD
    ell: int = BEYN_ELL
    rank_tol: float = BEYN_RANK_TOL
    N_c: int = 60
    h: float = BIE_FD_STEP
    p_max: int = 3


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description.

    Attributes:
        name: Experiment label used for output file names.
        solver: ``sov``, ``born`` or ``bie``.
        scatterer: ScattererSpec.
        k: Wavenumber.
        radius_omega: Radius of the measurement circle.
        J: Number of incident directions and observation points.
        delta: Relative noise level.
        seed: Noise generator seed.
        norm_kind: Norm used to scale the noise matrix.
        window: Sampling window (xmin, xmax, ymin, ymax).
        grid_size: Points per axis of the sampling grid.
        rho: Normalization exponent.
        far: Use the far-field variant of the indicator.
        N_f: Boundary faces of the integral-equation solver.
        h: Finite-difference step of the integral-equation solver; None scales the
            configured step with N_f.
        truncation: Series truncation order.
        adaptive: Raise the series order until the tail check passes.
        tev: TevSpec.
        output_dir: Directory receiving every output file.
    """

    name: str
    solver: str
    scatterer: ScattererSpec
    k: float
    radius_omega: float
    J: int
    delta: float = 0.0
    seed: int = NOISE_SEED
    norm_kind: str = NOISE_NORM_KIND
    window: Tuple[float, float, float, float] = GRID_WINDOW
    grid_size: int = GRID_SIZE
    rho: float = RHO
    far: bool = False
    N_f: int = 40
    h: Optional[float] = None
    truncation: int = SOV_TRUNCATION
    adaptive: bool = SOV_ADAPTIVE
    tev: TevSpec = field(default_factory=TevSpec)
    output_dir: str = DATA_DIR

    @classmethod
    def from_yaml(cls, path, overrides=None):
        """Load an experiment file and apply ``section.key=value`` overrides.

        Args:
            path: YAML experiment file.
            overrides: Iterable of override strings.

        Returns:
            ExperimentConfig

        Raises:
            ConfigValidationError: On unreadable files or invalid fields.
        """
        path = Path(path)
        try:
            with open(path, "r") as f:
                raw = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as exc:
            logger.error(f"Could not read experiment file {path}: {exc}")
            raise ConfigValidationError({"file": f"cannot read {path}: {exc}"}) from exc
        if not isinstance(raw, dict):
            raise ConfigValidationError({"file": f"{path} does not hold a mapping"})
        raw.setdefault("name", path.stem)
        return cls.from_dict(apply_overrides(raw, overrides))

    @classmethod
    def from_dict(cls, raw):
        """Validate a nested mapping; all field errors are reported together."""
        errors = {}
        raw = copy.deepcopy(raw or {})

        def section(name):
            value = raw.get(name) or {}
            if not isinstance(value, dict):
                errors[name] = "must be a mapping"
                return {}
            return value

        def read(key, source, parser, default=None, required=False):
            if key.split(".")[-1] not in source:
                if required:
                    errors[key] = "is required"
                return default
            try:
                return parser(source[key.split(".")[-1]])
            except (TypeError, ValueError) as exc:
                errors[key] = f"invalid value {source[key.split('.')[-1]]!r} ({exc})"
                return default

        unknown = sorted(set(raw) - set(SECTIONS) - {"name", "solver", "k"})
        for key in unknown:
            errors[key] = "unknown key"

        solver = raw.get("solver")
        if solver not in SOLVERS:
            errors["solver"] = f"must be one of {SOLVERS}, got {solver!r}"
        k = read("k", raw, parse_real, required=True)
        if k is not None and not k > 0:
            errors["k"] = f"must be positive, got {k}"

        scatterer = cls._scatterer(section("scatterer"), solver, read, errors)

        setup = section("setup")
        radius_omega = read("setup.radius_omega", setup, parse_real, required=True)
        J = read("setup.J", setup, int, required=True)
        if radius_omega is not None and not radius_omega > 0:
            errors["setup.radius_omega"] = f"must be positive, got {radius_omega}"
        if J is not None and J < 1:
            errors["setup.J"] = f"must be at least 1, got {J}"

        noise = section("noise")
        delta = read("noise.delta", noise, parse_real, 0.0)
        if delta is not None and not 0 <= delta < 1:
            errors["noise.delta"] = f"must lie in [0, 1), got {delta}"
        seed = read("noise.seed", noise, int, NOISE_SEED)
        norm_kind = read("noise.norm_kind", noise, str, NOISE_NORM_KIND)
        if norm_kind not in NORM_KINDS:
            errors["noise.norm_kind"] = f"must be one of {NORM_KINDS}, got {norm_kind!r}"

        imaging = section("imaging")
        window = read("imaging.window", imaging, lambda v: tuple(parse_real(x) for x in v))
        window = GRID_WINDOW if window is None else window
        if len(window) != 4 or not (window[1] > window[0] and window[3] > window[2]):
            errors["imaging.window"] = f"must be [xmin, xmax, ymin, ymax], got {list(window)}"
        grid_size = read("imaging.size", imaging, int, GRID_SIZE)
        if grid_size is not None and grid_size < 1:
            errors["imaging.size"] = f"must be positive, got {grid_size}"
        rho = read("imaging.rho", imaging, parse_real, RHO)
        if rho is not None and not rho > 0:
            errors["imaging.rho"] = f"must be positive, got {rho}"
        far = bool(imaging.get("far", False))

        bie = section("bie")
        N_f = read("bie.N_f", bie, int, 40)
        h = read("bie.h", bie, parse_real)
        if h is not None and not h > 0:
            errors["bie.h"] = f"must be positive, got {h}"
        if N_f is not None and N_f < 2:
            errors["bie.N_f"] = f"must be at least 2, got {N_f}"
        sov = section("sov")
        truncation = read("sov.truncation", sov, int, SOV_TRUNCATION)
        adaptive = bool(sov.get("adaptive", SOV_ADAPTIVE))

        tev = cls._tev(section("tev"), read, errors)
        output_dir = str(section("output").get("dir", DATA_DIR))

        if not errors:
            try:
                config = cls(
                    name=str(raw.get("name", "experiment")),
                    solver=solver,
                    scatterer=scatterer,
                    k=k,
                    radius_omega=radius_omega,
                    J=J,
                    delta=delta,
                    seed=seed,
                    norm_kind=norm_kind,
                    window=tuple(window),
                    grid_size=grid_size,
                    rho=rho,
                    far=far,
                    N_f=N_f,
                    h=h,
                    truncation=truncation,
                    adaptive=adaptive,
                    tev=tev,
                    output_dir=output_dir,
                )
                # building the solver objects runs their own invariant checks
                config.forward_model()
                config.noise_model()
                config.setup()
                return config
            except DelamError as exc:
                errors["scatterer"] = str(exc)
        logger.error(f"Experiment configuration rejected: {sorted(errors)}")
        raise ConfigValidationError(errors)

    @staticmethod
    def _scatterer(scat, solver, read, errors):
        n = read("scatterer.n", scat, parse_complex, required=True)
        mu = read("scatterer.mu", scat, parse_complex, required=True)
        gamma = read("scatterer.gamma", scat, parse_complex, required=True)
        enforce = bool(scat.get("enforce_signs", False))
        kind = scat.get("curve")
        params = read("scatterer.params", scat, lambda v: tuple(float(x) for x in v), ())
        centers = read(
            "scatterer.centers",
            scat,
            lambda v: tuple((float(c[0]), float(c[1])) for c in v),
            (),
        )
        r0 = read("scatterer.r0", scat, parse_real)

        if solver == "born":
            if not centers or r0 is None:
                errors["scatterer.centers"] = "the born solver needs small disks (centers, r0)"
        elif kind is None:
            errors["scatterer.curve"] = "is required"
        if solver == "sov" and kind is not None:
            cx_cy = tuple(params[:2]) if len(params) == 3 else (0.0, 0.0)
            if kind != "circle" or cx_cy != (0.0, 0.0):
                errors["solver"] = "the series solver supports centered disks only"
        return ScattererSpec(
            kind=kind,
            params=params or (),
            n=n,
            mu=mu,
            gamma=gamma,
            enforce_signs=enforce,
            centers=centers or (),
            r0=r0,
        )

    @staticmethod
    def _tev(tev, read, errors):
        defaults = TevSpec()
        spec = TevSpec(
            center=read("tev.center", tev, parse_complex, defaults.center),
            radius=read("tev.radius", tev, parse_real, defaults.radius),
            N_quad=read("tev.N_quad", tev, int, defaults.N_quad),
            ell=read("tev.ell", tev, int, defaults.ell),
            rank_tol=read("tev.rank_tol", tev, parse_real, defaults.rank_tol),
            N_c=read("tev.N_c", tev, int, defaults.N_c),
            h=read("tev.h", tev, parse_real, defaults.h),
            p_max=read("tev.p_max", tev, int, defaults.p_max),
        )
        if spec.radius is not None and not spec.radius > 0:
            errors["tev.radius"] = f"must be positive, got {spec.radius}"
        if spec.N_c is not None and (spec.N_c < 4 or spec.N_c % 2):
            errors["tev.N_c"] = f"must be even and at least 4, got {spec.N_c}"
        if spec.p_max is not None and spec.p_max < 0:
            errors["tev.p_max"] = f"must be non-negative, got {spec.p_max}"
        return spec

    # builders

    def curve(self):
        """Boundary of D (None for Born configurations)."""
        if self.scatterer.kind is None:
            return None
        return make_curve(self.scatterer.kind, list(self.scatterer.params))

    def scatterer_config(self):
        return ScattererConfig(
            k=self.k,
            n=self.scatterer.n,
            mu=self.scatterer.mu,
            gamma=self.scatterer.gamma,
            curve=self.curve(),
            enforce_signs=self.scatterer.enforce_signs,
        )

    def regions(self):
        return SmallRegionSet(
            centers=self.scatterer.centers,
            r0=self.scatterer.r0,
            n=self.scatterer.n,
            mu=self.scatterer.mu,
            gamma=self.scatterer.gamma,
        )

    def setup(self):
        setup = MeasurementSetup(radius_omega=self.radius_omega, J=self.J)
        curve = self.curve()
        if curve is not None:
            setup.check_encloses(curve)
        return setup

    def noise_model(self):
        return NoiseModel(delta=self.delta, seed=self.seed, norm_kind=self.norm_kind)

    def forward_model(self):
        """ForwardModel picked by ``solver``."""
        if self.solver == "born":
            return BornModel(self.regions(), self.k)
        cfg = self.scatterer_config()
        if self.solver == "sov":
            return SeriesModel(cfg, truncation=self.truncation, adaptive=self.adaptive)
        return BoundaryIntegralModel(cfg, self.N_f, h=self.h)

    def grid(self):
        return make_grid(self.grid_size, self.window)

    def tev_problem(self):
        return TevProblem(
            curve=self.curve(),
            n=self.scatterer.n,
            mu=self.scatterer.mu,
            gamma=self.scatterer.gamma,
            n_nodes=self.tev.N_c,
            h=self.tev.h,
        )

    def contour(self):
        return ContourSpec(
            center=self.tev.center,
            radius=self.tev.radius,
            N_quad=self.tev.N_quad,
            ell=self.tev.ell,
            rank_tol=self.tev.rank_tol,
        )

    def to_dict(self):
        """Fully resolved parameters for the run manifest."""
        scat = self.scatterer
        return {
            "name": self.name,
            "solver": self.solver,
            "k": self.k,
            "scatterer": {
                "curve": scat.kind,
                "params": list(scat.params),
                "n": str(scat.n),
                "mu": str(scat.mu),
                "gamma": str(scat.gamma),
                "enforce_signs": scat.enforce_signs,
                "centers": [list(c) for c in scat.centers],
                "r0": scat.r0,
            },
            "setup": {"radius_omega": self.radius_omega, "J": self.J},
            "noise": {"delta": self.delta, "seed": self.seed, "norm_kind": self.norm_kind},
            "imaging": {
                "window": list(self.window),
                "size": self.grid_size,
                "rho": self.rho,
                "far": self.far,
            },
            "bie": {"N_f": self.N_f, "h": fd_step(self.N_f, self.h)},
            "sov": {"truncation": self.truncation, "adaptive": self.adaptive},
            "tev": {
                "center": str(complex(self.tev.center)),
                "radius": self.tev.radius,
                "N_quad": self.tev.N_quad,
                "ell": self.tev.ell,
                "rank_tol": self.tev.rank_tol,
                "N_c": self.tev.N_c,
                "h": self.tev.h,
                "p_max": self.tev.p_max,
            },
            "output": {"dir": self.output_dir},
        }
