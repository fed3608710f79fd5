"""
Module: src.forward.model
Purpose: Common interface over the three forward solvers.
Dependencies: numpy
Output: Cauchy data and far-field matrices from a solver picked by name

Key Concepts:
- ForwardModel: abstract base class (cauchy_data / farfield)
- SeriesModel: separation of variables, centered disks only
- BornModel: small-region approximation
- BoundaryIntegralModel: arbitrary smooth curves
"""

import logging
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from src.core.config import SOV_ADAPTIVE, SOV_TRUNCATION
from src.core.errors import InvalidParameterError
from src.forward.bie import bie_cauchy_data, bie_farfield_matrix, fd_step
from src.forward.born import born_cauchy_data
from src.forward.sov import sov_cauchy_data, sov_farfield

logger = logging.getLogger(__name__)


class ForwardModel(ABC):
    """Abstract base class for forward scattering solvers.

    Subclasses turn a scatterer description into synthetic measurements.
    """

    name = "abstract"

    @abstractmethod
    def cauchy_data(self, setup):
        """Scattered field and radial derivative on the measurement circle.

        Args:
            setup: MeasurementSetup

        Returns:
            CauchyData
        """

    @abstractmethod
    def farfield(self, J: int) -> np.ndarray:
        """J x J far-field matrix for equispaced directions.

        Args:
            J: Number of incident and observation directions

        Returns:
            Complex (J, J) array
        """


class SeriesModel(ForwardModel):
    """Exact series solution for a centered disk."""

    name = "sov"

    def __init__(self, cfg, truncation: int = SOV_TRUNCATION, adaptive: bool = SOV_ADAPTIVE):
        self.cfg = cfg
        self.k = cfg.k
        self.truncation = truncation
        self.adaptive = adaptive
        logger.info(f"Initialized SeriesModel with P={truncation}, adaptive={adaptive}")

    def cauchy_data(self, setup):
        return sov_cauchy_data(self.cfg, setup, P=self.truncation, adaptive=self.adaptive)

    def farfield(self, J):
        return sov_farfield(self.cfg, J, P=self.truncation, adaptive=self.adaptive)


class BornModel(ForwardModel):
    """Born approximation for a union of small disks."""

    name = "born"

    def __init__(self, regions, k: float):
        self.regions = regions
        self.k = k
        logger.info(f"Initialized BornModel with {len(regions.centers)} regions, r0={regions.r0}")

    def cauchy_data(self, setup):
        return born_cauchy_data(self.regions, setup, self.k)

    def farfield(self, J):
        raise InvalidParameterError("The Born model produces near-field Cauchy data only")


class BoundaryIntegralModel(ForwardModel):
    """Boundary-integral solver for smooth curves."""

    name = "bie"

    def __init__(self, cfg, N_f: int, h: Optional[float] = None):
        self.cfg = cfg
        self.k = cfg.k
        self.N_f = int(N_f)
        self.h = fd_step(self.N_f, h)
        logger.info(f"Initialized BoundaryIntegralModel with N_f={self.N_f}, h={self.h}")

    def cauchy_data(self, setup):
        return bie_cauchy_data(self.cfg, setup, self.N_f, h=self.h)

    def farfield(self, J):
        return bie_farfield_matrix(self.cfg, J, self.N_f, h=self.h)

