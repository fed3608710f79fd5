"""Shared data types for the forward solvers."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.core.errors import InvalidGeometryError, InvalidParameterError, ShapeMismatchError
from src.geometry import BoundaryCurve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScattererConfig:
    """Physical parameters of the delaminated scatterer.

    Attributes:
        k: Real wavenumber (> 0).
        n: Refractive index inside D.
        mu: Coefficient of the Laplace-Beltrami term on the boundary.
        gamma: Coefficient of the zeroth-order boundary term.
        curve: Boundary of D.
        enforce_signs: Require Im(n) >= 0, Re(mu) > 0 and Re(gamma) > 0.
    """

    k: float
    n: complex
    mu: complex
    gamma: complex
    curve: BoundaryCurve
    enforce_signs: bool = False

    def __post_init__(self):
        if not np.isfinite(self.k) or self.k <= 0:
            raise InvalidParameterError(f"Wavenumber must be positive, got k={self.k}")
        for name in ("n", "mu", "gamma"):
            if not np.isfinite(complex(getattr(self, name))):
                raise InvalidParameterError(f"{name} must be finite")
        if self.enforce_signs:
            problems = []
            if complex(self.n).imag < 0:
                problems.append(f"Im(n) = {complex(self.n).imag} < 0")
            if complex(self.mu).real <= 0:
                problems.append(f"Re(mu) = {complex(self.mu).real} <= 0")
            if complex(self.gamma).real <= 0:
                problems.append(f"Re(gamma) = {complex(self.gamma).real} <= 0")
            if problems:
                raise InvalidParameterError("Sign conditions violated: " + "; ".join(problems))

    @property
    def k_interior(self):
        """Interior wavenumber k*sqrt(n) (principal branch)."""
        return self.k * np.sqrt(complex(self.n))

    @property
    def is_centered_disk(self):
        return (
            self.curve.kind == "circle" and self.curve.params[0] == 0 and self.curve.params[1] == 0
        )

    @property
    def radius(self):
        """Disk radius (circles only)."""
        return self.curve.params[2]


@dataclass(frozen=True)
class MeasurementSetup:
    """Measurement circle of radius ``radius_omega`` with J directions = observation points."""

    radius_omega: float
    J: int

    def __post_init__(self):
        if self.radius_omega <= 0:
            raise InvalidGeometryError(f"radius_omega must be positive, got {self.radius_omega}")
        if self.J < 1:
            raise InvalidParameterError(f"J must be at least 1, got {self.J}")

    @property
    def angles(self):
        """phi_j = 2*pi*(j-1)/J."""
        return 2 * np.pi * np.arange(self.J) / self.J

    @property
    def directions(self):
        return np.stack([np.cos(self.angles), np.sin(self.angles)], axis=-1)

    @property
    def points(self):
        return self.radius_omega * self.directions

    @property
    def weights(self):
        """Riemann-sum weights 2*pi*radius_omega/J."""
        return np.full(self.J, 2 * np.pi * self.radius_omega / self.J)

    def check_encloses(self, curve):
        """Raise if the scatterer closure is not strictly inside Omega."""
        if curve.max_radius >= self.radius_omega:
            raise InvalidGeometryError(
                f"Scatterer reaches radius {curve.max_radius:.4g} >= radius_omega "
                f"{self.radius_omega:.4g}"
            )


@dataclass
class CauchyData:
    """Scattered field and its radial derivative on the measurement circle.

    Attributes:
        us: J x J matrix [u^s(x_i, y_j)] (rows: observation points, columns: directions).
        dus: J x J matrix [d_r u^s(x_i, y_j)], or None for far-field-only data.
        setup: Measurement geometry.
        k: Wavenumber used to generate the data.
        notes: Free-form provenance (solver name, warnings).
    """

    us: np.ndarray
    dus: Optional[np.ndarray]
    setup: MeasurementSetup
    k: float
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        shape = (self.setup.J, self.setup.J)
        if self.us.shape != shape:
            raise ShapeMismatchError(f"us has shape {self.us.shape}, expected {shape}")
        if self.dus is not None and self.dus.shape != shape:
            raise ShapeMismatchError(f"dus has shape {self.dus.shape}, expected {shape}")
        if not np.all(np.isfinite(self.us)) or (
            self.dus is not None and not np.all(np.isfinite(self.dus))
        ):
            raise InvalidParameterError("Cauchy data contains non-finite entries")
