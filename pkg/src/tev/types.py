"""Problem, contour and result types for transmission-eigenvalue computations."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd

from src.core.config import BEYN_ELL, BEYN_N_QUAD, BEYN_RANK_TOL, BIE_FD_STEP
from src.core.errors import InvalidDiscretizationError, InvalidParameterError

logger = logging.getLogger(__name__)

METHODS = ("series_det", "beyn_bie", "beyn_det")


@dataclass(frozen=True)
class TevProblem:
    """Eigenvalue problem for a penetrable scatterer with the delamination condition.

    Attributes:
        curve: Boundary of D.
        n: Refractive index (real, > 1 on the real-coefficient path).
        mu: Laplace-Beltrami coefficient.
        gamma: Zeroth-order boundary coefficient.
        n_nodes: Collocation nodes N_c of the boundary-integral route.
        h: Finite-difference step of the tangential second derivative.
    """

    curve: object
    n: complex
    mu: complex
    gamma: complex
    n_nodes: int = 60
    h: float = BIE_FD_STEP

    def __post_init__(self):
        n = complex(self.n)
        if n.imag == 0 and n.real <= 1:
            raise InvalidParameterError(f"Real refractive index must exceed 1, got n={n.real}")
        if self.n_nodes < 4 or self.n_nodes % 2:
            raise InvalidDiscretizationError(
                f"Collocation node count must be even and >= 4, got {self.n_nodes}"
            )
        if not self.h > 0:
            raise InvalidParameterError(f"Finite-difference step must be positive, got {self.h}")

    @property
    def sqrt_n(self):
        return np.sqrt(complex(self.n))


@dataclass(frozen=True)
class ContourSpec:
    """Circular contour |z - center| = radius with Beyn parameters."""

    center: complex
    radius: float
    N_quad: int = BEYN_N_QUAD
    ell: int = BEYN_ELL
    rank_tol: float = BEYN_RANK_TOL

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidParameterError(f"Contour radius must be positive, got {self.radius}")
        if self.N_quad < 2:
            raise InvalidDiscretizationError(f"Need at least 2 quadrature nodes, got {self.N_quad}")
        if self.ell < 1:
            raise InvalidParameterError(f"Column count ell must be positive, got {self.ell}")

    def contains(self, z, slack=0.0):
        return np.abs(np.asarray(z) - complex(self.center)) <= self.radius * (1 + slack)

    def nodes(self, n_nodes=None, rotation=0.0):
        n_nodes = self.N_quad if n_nodes is None else n_nodes
        theta = 2 * np.pi * (np.arange(n_nodes) + rotation) / n_nodes
        return complex(self.center) + self.radius * np.exp(1j * theta)


@dataclass
class TevResult:
    """Eigenvalues found in one region.

    Attributes:
        eigenvalues: Distinct eigenvalues (complex array).
        residuals: Relative residual per eigenvalue.
        method: One of ``series_det``, ``beyn_bie``, ``beyn_det``.
        multiplicities: Multiplicity per eigenvalue.
        modes: Angular mode p per eigenvalue (series route) or None.
        converged: Newton convergence flag per eigenvalue.
        notes: Free-form provenance.
    """

    eigenvalues: np.ndarray
    residuals: np.ndarray
    method: str
    multiplicities: List[int] = field(default_factory=list)
    modes: List[Optional[int]] = field(default_factory=list)
    converged: List[bool] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidParameterError(f"Unknown method '{self.method}', expected {METHODS}")
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=complex)
        self.residuals = np.asarray(self.residuals, dtype=float)
        count = len(self.eigenvalues)
        self.multiplicities = list(self.multiplicities) or [1] * count
        self.modes = list(self.modes) or [None] * count
        self.converged = list(self.converged) or [True] * count

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def total_multiplicity(self):
        return int(sum(self.multiplicities))

    def expanded(self):
        """Eigenvalues repeated by multiplicity, sorted by real then imaginary part."""
        values = np.repeat(self.eigenvalues, self.multiplicities)
        return values[np.lexsort((values.imag, values.real))]

    def sorted(self):
        order = np.lexsort((self.eigenvalues.imag, self.eigenvalues.real))
        return TevResult(
            eigenvalues=self.eigenvalues[order],
            residuals=self.residuals[order],
            method=self.method,
            multiplicities=[self.multiplicities[i] for i in order],
            modes=[self.modes[i] for i in order],
            converged=[self.converged[i] for i in order],
            notes=list(self.notes),
        )

    def to_frame(self):
        """One row per distinct eigenvalue: re, im, residual, method, multiplicity, mode."""
        return pd.DataFrame(
            {
                "re": self.eigenvalues.real,
                "im": self.eigenvalues.imag,
                "residual": self.residuals,
                "method": self.method,
                "multiplicity": self.multiplicities,
                "mode": pd.array(self.modes, dtype="Int64"),
                "converged": self.converged,
            }
        )
