"""Photon-number distribution type shared by every source and link model."""

from typing_extensions import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

__all__ = [
    'PhotonNumberDistribution',
    'NORMALIZATION_TOL',
]

NORMALIZATION_TOL: float = 1e-9
'''Allowed deviation of the total probability mass from 1.'''


class PhotonNumberDistribution(BaseModel):
    """Truncated probability vector over photon (pair, count) numbers 0..n_max.

    Instances are immutable and validated on construction: every entry lies
    in [0, 1] and the entries sum to 1 within NORMALIZATION_TOL.
    """

    model_config = ConfigDict(frozen=True, extra='forbid', allow_inf_nan=False)

    probs: tuple[float, ...] = Field(
        ..., min_length=1, description='Probability of n = 0..n_max.'
    )

    @model_validator(mode='after')
    def _check_normalization(self) -> Self:
        values = np.asarray(self.probs, dtype=float)
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ValueError('every probability must lie in [0, 1]')
        total = float(values.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f'probabilities sum to {total!r}, expected 1')
        return self

    @classmethod
    def from_array(cls, values: ArrayLike) -> 'PhotonNumberDistribution':
        """Build a distribution from an array, clipping rounding residue."""
        clipped = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
        return cls(probs=tuple(float(v) for v in clipped))

    @property
    def n_max(self) -> int:
        """Truncation bound (largest represented count)."""
        return len(self.probs) - 1

    def as_array(self) -> NDArray[np.float64]:
        """Return the probabilities as a float64 numpy array."""
        return np.asarray(self.probs, dtype=float)

    def mean(self) -> float:
        """Mean count of the distribution."""
        return float(np.dot(np.arange(self.n_max + 1), self.as_array()))

    def __getitem__(self, n: int) -> float:
        if n < 0:
            raise IndexError(f'photon number must be non-negative, got {n}')
        return self.probs[n] if n <= self.n_max else 0.0

    def __len__(self) -> int:
        return len(self.probs)
