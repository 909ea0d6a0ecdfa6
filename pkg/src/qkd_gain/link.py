"""Channel transmittance and Bob's receiver model."""

import logging
import math

import numpy as np

from .errors import InvalidParameterError
from .types import (
    ChannelModel,
    FiberChannel,
    FreeSpaceChannel,
    LinkOutcome,
    ReceiverParams,
    SatelliteChannel,
    SourceCharacterization,
)

__all__ = [
    'transmittance',
    'total_efficiency',
    'link_outcome',
]

logger = logging.getLogger(__name__)


def _check_distance(d: float) -> None:
    if not math.isfinite(d) or d <= 0.0:
        raise InvalidParameterError(f'd must be a positive distance in km, got {d!r}')


def transmittance(chan: ChannelModel, d: float) -> float:
    """Probability that a photon survives the channel over ``d`` km.

    Fiber: 10^(-(alpha * d + fixed_loss_db) / 10).
    Free space and satellite: ref_coupling * (ref_distance / d)^2, capped at 1.

    Raises:
        InvalidParameterError: If d is not a positive finite distance
    """
    _check_distance(d)
    match chan:
        case FiberChannel(alpha_db_per_km=alpha, fixed_loss_db=fixed):
            return 10.0 ** (-(alpha * d + fixed) / 10.0)
        case FreeSpaceChannel(ref_coupling=coupling, ref_distance_km=ref) | SatelliteChannel(
            ref_coupling=coupling, ref_distance_km=ref
        ):
            return min(1.0, coupling * (ref / d) ** 2)
    raise InvalidParameterError(f'unknown channel model: {chan!r}')


def total_efficiency(chan: ChannelModel, d: float, rx: ReceiverParams) -> float:
    """Channel transmittance times Bob's detector efficiency."""
    return transmittance(chan, d) * rx.efficiency


def _detection_probabilities(n_max: int, eta: float) -> np.ndarray:
    # 1 - (1 - eta)^n, accurate for small eta
    n = np.arange(n_max + 1)
    if eta >= 1.0:
        return (n > 0).astype(float)
    return -np.expm1(n * math.log1p(-eta))


def link_outcome(
    src: SourceCharacterization, chan: ChannelModel, d: float, rx: ReceiverParams
) -> LinkOutcome:
    """Detection probability and error rate at Bob for one triggered pulse.

    Any detection that involves a signal photon, including one that
    coincides with a dark count, is wrong with probability
    ``rx.baseline_error``. Dark and background detections with no signal
    photon present are wrong half the time.

    Args:
        src: Launched-pulse statistics
        chan: Channel between Alice and Bob
        d: Distance in km
        rx: Bob's receiver parameters

    Returns:
        LinkOutcome with p_exp, eps and the signal-only detection probability
    """
    eta_tot = total_efficiency(chan, d, rx)
    signal = src.signal_dist
    p_signal = float(np.dot(signal.as_array(), _detection_probabilities(signal.n_max, eta_tot)))
    p_signal = min(max(p_signal, 0.0), 1.0)

    dark = rx.dark_prob_per_pulse
    p_exp = p_signal + dark * (1.0 - p_signal)
    if p_exp <= 0.0:
        return LinkOutcome(p_exp=0.0, eps=0.0, p_signal=0.0)

    eps = (rx.baseline_error * p_signal + 0.5 * (p_exp - p_signal)) / p_exp
    return LinkOutcome(p_exp=min(p_exp, 1.0), eps=min(max(eps, 0.0), 1.0), p_signal=p_signal)
