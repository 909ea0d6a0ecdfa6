"""Photon-number distributions and the transformations every source model needs.

Functions:
    truncation_bound: Photon-number cutoff for a Poisson mean
    delta: Point-mass distribution
    poisson_pmf: Truncated Poisson distribution with the tail folded into n_max
    binomial_thin: Independent per-photon loss
    multi_photon_prob: Probability of two or more photons
    binary_entropy: Shannon entropy of a binary error rate, in bits
"""

import logging
import math
from typing import overload

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special, stats

from ._utils import load_defaults_config
from .errors import InvalidParameterError
from .types import PhotonNumberDistribution

__all__ = [
    'truncation_bound',
    'delta',
    'poisson_pmf',
    'binomial_thin',
    'multi_photon_prob',
    'binary_entropy',
]

logger = logging.getLogger(__name__)


def _n_max_bounds() -> tuple[int, int]:
    lo, hi = load_defaults_config()['photon_stats']['n_max_bounds']
    return int(lo), int(hi)


def _check_probability(name: str, value: float) -> None:
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise InvalidParameterError(f'{name} must lie in [0, 1], got {value!r}')


def truncation_bound(mu: float) -> int:
    """Smallest n whose upper Poisson tail P(N > n) is below the configured mass.

    The result is clamped to the configured ``n_max_bounds`` (16..64 by
    default), which covers every mean up to 10 with room to spare.

    Raises:
        InvalidParameterError: If mu is negative or not finite
    """
    if not math.isfinite(mu) or mu < 0.0:
        raise InvalidParameterError(f'mu must be a finite non-negative number, got {mu!r}')

    lo, hi = _n_max_bounds()
    if mu == 0.0:
        return lo
    tail_mass = load_defaults_config()['photon_stats']['tail_mass']
    tails = stats.poisson.sf(np.arange(hi + 1), mu)
    below = np.flatnonzero(tails < tail_mass)
    n_max = int(below[0]) if below.size else hi
    return min(max(n_max, lo), hi)


def delta(n: int, n_max: int | None = None) -> PhotonNumberDistribution:
    """Distribution with all mass at photon number ``n``."""
    if n < 0:
        raise InvalidParameterError(f'photon number must be non-negative, got {n}')
    size = max(n, n_max if n_max is not None else _n_max_bounds()[0]) + 1
    probs = np.zeros(size)
    probs[n] = 1.0
    return PhotonNumberDistribution.from_array(probs)


def poisson_pmf(mu: float) -> PhotonNumberDistribution:
    """Poisson distribution truncated at ``truncation_bound(mu)``.

    The mass beyond n_max is added to the last entry so the result stays
    normalized.

    Args:
        mu: Mean photon (or pair) number per pulse

    Returns:
        PhotonNumberDistribution over 0..n_max

    Raises:
        InvalidParameterError: If mu is negative or not finite
    """
    n_max = truncation_bound(mu)
    if mu == 0.0:
        return delta(0, n_max)

    probs = stats.poisson.pmf(np.arange(n_max + 1), mu)
    probs[n_max] += stats.poisson.sf(n_max, mu)
    return PhotonNumberDistribution.from_array(probs)


def thinning_matrix(n_max: int, eta: float) -> NDArray[np.float64]:
    """Row n holds P(k of n photons survive) for k = 0..n_max."""
    n = np.arange(n_max + 1)
    return stats.binom.pmf(n[np.newaxis, :], n[:, np.newaxis], eta)


def binomial_thin(dist: PhotonNumberDistribution, eta: float) -> PhotonNumberDistribution:
    """Keep each photon independently with probability ``eta``.

    result[k] = sum over n >= k of dist[n] * C(n, k) * eta^k * (1 - eta)^(n - k)

    Raises:
        InvalidParameterError: If eta lies outside [0, 1]
    """
    _check_probability('eta', eta)
    if eta == 1.0:
        return dist
    thinned = dist.as_array() @ thinning_matrix(dist.n_max, eta)
    return PhotonNumberDistribution.from_array(thinned)


def multi_photon_prob(dist: PhotonNumberDistribution) -> float:
    """Probability of two or more photons, 1 - P(0) - P(1)."""
    return min(1.0, math.fsum(dist.probs[2:]))


@overload
def binary_entropy(eps: float) -> float: ...
@overload
def binary_entropy(eps: NDArray[np.float64]) -> NDArray[np.float64]: ...


def binary_entropy(eps: ArrayLike) -> float | NDArray[np.float64]:
    """Binary entropy H(eps) in bits, with H(0) = H(1) = 0.

    Accepts a scalar or an array; the return type follows the input.

    Raises:
        InvalidParameterError: If any value lies outside [0, 1]
    """
    values = np.asarray(eps, dtype=float)
    if not np.all(np.isfinite(values)) or np.any((values < 0.0) | (values > 1.0)):
        raise InvalidParameterError(f'eps must lie in [0, 1], got {eps!r}')

    # Both halves derive from the same rounded value, so H(x) == H(1 - x) exactly
    high = np.maximum(values, 1.0 - values)
    low = 1.0 - high
    bits = (special.entr(low) + special.entr(high)) / math.log(2.0)
    if bits.ndim == 0:
        return float(bits)
    return bits
