"""Multiplicative complex noise on measured data."""

import logging
from dataclasses import dataclass

import numpy as np

from src.core.config import NOISE_NORM_KIND, NOISE_SEED
from src.core.errors import InvalidParameterError
from src.forward.types import CauchyData

logger = logging.getLogger(__name__)

NORM_KINDS = ("frobenius", "spectral")


@dataclass(frozen=True)
class NoiseModel:
    """Relative noise level, generator seed and the norm used to scale E."""

    delta: float
    seed: int = NOISE_SEED
    norm_kind: str = NOISE_NORM_KIND

    def __post_init__(self):
        if not 0 <= self.delta < 1:
            raise InvalidParameterError(f"Noise level must lie in [0, 1), got {self.delta}")
        if self.norm_kind not in NORM_KINDS:
            raise InvalidParameterError(
                f"Unknown norm kind '{self.norm_kind}', expected one of {NORM_KINDS}"
            )

    def generator(self):
        return np.random.default_rng(self.seed)


def noise_matrix(shape, rng, norm_kind=NOISE_NORM_KIND):
    """Complex matrix with re/im parts uniform on [-1, 1], scaled to unit norm."""
    E = rng.uniform(-1.0, 1.0, size=shape) + 1j * rng.uniform(-1.0, 1.0, size=shape)
    norm = np.linalg.norm(E, ord="fro" if norm_kind == "frobenius" else 2)
    return E / norm


def add_noise(matrix, model, rng=None):
    """Return matrix * (1 + delta E) entrywise.

    Args:
        matrix: Complex data matrix.
        model: NoiseModel.
        rng: Generator to draw E from (defaults to a fresh one seeded by the model).

    Returns:
        Noisy copy; an exact copy when delta = 0.
    """
    matrix = np.asarray(matrix)
    if model.delta == 0:
        return matrix.copy()
    rng = model.generator() if rng is None else rng
    E = noise_matrix(matrix.shape, rng, model.norm_kind)
    return matrix * (1 + model.delta * E)


def noisy_cauchy_data(data, model):
    """Apply independent noise draws E1 to u^s and E2 to d_r u^s from one seeded stream."""
    if model.delta == 0:
        return data
    rng = model.generator()
    us = add_noise(data.us, model, rng)
    dus = None if data.dus is None else add_noise(data.dus, model, rng)
    logger.info(f"Added {100 * model.delta:g}% noise (seed={model.seed}, {model.norm_kind})")
    notes = data.notes + [f"noise delta={model.delta} seed={model.seed}"]
    return CauchyData(us=us, dus=dus, setup=data.setup, k=data.k, notes=notes)
