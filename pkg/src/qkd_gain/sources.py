"""Source models: trigger rate and launched-pulse statistics for each design.

Each design is a ``BaseSourceModel`` registered with ``SourceModelDispatcher``
under its ``SourceKind``, so callers select a model by name:

    dispatcher = SourceModelDispatcher()
    src = dispatcher('cps_pnr', mu=0.1, trig=TriggerDetectorParams(efficiency=0.7))

Classes:
    BaseSourceModel: Interface shared by every source design
    SourceModelDispatcher: Registry and factory keyed by source kind
    WeakCoherentSource: Attenuated laser, untriggered
    ClickTriggeredSource: Pair source heralded by a click/no-click detector
    PNRTriggeredSource: Pair source heralded by a photon-number-resolving detector
"""

import logging
import math
from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy import stats
from typing_extensions import override

from .errors import DegenerateSourceError, InvalidParameterError, UnsupportedSourceError
from .photon_stats import binomial_thin, multi_photon_prob, poisson_pmf
from .types import (
    PhotonNumberDistribution,
    SourceCharacterization,
    SourceKind,
    TriggerDetectorParams,
)

__all__ = [
    'TriggerResponse',
    'trigger_response',
    'click_probability',
    'pnr_report_distribution',
    'BaseSourceModel',
    'SourceModelDispatcher',
    'WeakCoherentSource',
    'ClickTriggeredSource',
    'PNRTriggeredSource',
    'characterize',
    'characterize_wcp',
    'characterize_cps',
    'characterize_cps_pnr',
]

logger = logging.getLogger(__name__)


class TriggerResponse(NamedTuple):
    """Per pair number n = 0..n_max: P(click | n) and P(report = 1 | n)."""

    click: NDArray[np.float64]
    report_one: NDArray[np.float64]


def _post_dark_counts(n_max: int, trig: TriggerDetectorParams) -> NDArray[np.float64]:
    # Row n: distribution of photoelectrons plus at most one dark count, m' = 0..n_max+1
    n = np.arange(n_max + 1)
    m = np.arange(n_max + 2)
    photoelectrons = stats.binom.pmf(m[np.newaxis, :], n[:, np.newaxis], trig.efficiency)
    dark = trig.dark_prob_per_gate
    counts = photoelectrons * (1.0 - dark)
    counts[:, 1:] += photoelectrons[:, :-1] * dark
    return counts


@lru_cache(maxsize=64)
def trigger_response(n_max: int, trig: TriggerDetectorParams) -> TriggerResponse:
    """Trigger response for pair numbers 0..n_max, cached per (n_max, trig).

    The returned arrays are read-only.
    """
    counts = _post_dark_counts(n_max, trig)
    err = trig.discrimination_error

    click = 1.0 - counts[:, 0]
    # Report 1: m' = 1 read correctly, or m' = 2 read one low
    report_one = counts[:, 1] * (1.0 - err) + counts[:, 2] * (err / 2.0)

    click.flags.writeable = False
    report_one.flags.writeable = False
    return TriggerResponse(click=click, report_one=report_one)


def click_probability(n_pairs: int, trig: TriggerDetectorParams) -> float:
    """P(click | n pairs) = 1 - (1 - efficiency)^n (1 - dark)."""
    if n_pairs < 0:
        raise InvalidParameterError(f'n_pairs must be non-negative, got {n_pairs}')
    return 1.0 - (1.0 - trig.efficiency) ** n_pairs * (1.0 - trig.dark_prob_per_gate)


def pnr_report_distribution(
    n_pairs: int, trig: TriggerDetectorParams
) -> PhotonNumberDistribution:
    """Distribution of the count a PNR trigger reports for ``n_pairs`` idler photons.

    Photoelectrons are Binomial(n_pairs, efficiency); a dark count adds one
    with probability ``dark_prob_per_gate``. A non-zero count m' is reported
    correctly with probability 1 - discrimination_error and otherwise as
    m' - 1 or m' + 1 with equal shares. A zero count is always reported as 0.

    Args:
        n_pairs: Number of idler photons reaching the detector
        trig: Trigger detector parameters

    Returns:
        Distribution over reported counts 0..n_pairs + 2
    """
    if n_pairs < 0:
        raise InvalidParameterError(f'n_pairs must be non-negative, got {n_pairs}')

    counts = _post_dark_counts(n_pairs, trig)[n_pairs]
    err = trig.discrimination_error
    report = np.zeros(n_pairs + 3)
    report[0] = counts[0]
    for m_prime in range(1, n_pairs + 2):
        mass = counts[m_prime]
        report[m_prime] += mass * (1.0 - err)
        report[m_prime - 1] += mass * (err / 2.0)
        report[m_prime + 1] += mass * (err / 2.0)
    return PhotonNumberDistribution.from_array(report)


def _condition_on_trigger(
    kind: SourceKind,
    pairs: PhotonNumberDistribution,
    acceptance: NDArray[np.float64],
    launch_efficiency: float,
) -> SourceCharacterization:
    weighted = pairs.as_array() * acceptance
    p_s = min(1.0, math.fsum(weighted))
    if p_s <= 0.0:
        raise DegenerateSourceError(f'{kind} source never triggers (p_s = 0)')

    signal = binomial_thin(PhotonNumberDistribution.from_array(weighted / p_s), launch_efficiency)
    return SourceCharacterization(
        kind=kind, p_s=p_s, s_m=multi_photon_prob(signal), signal_dist=signal
    )


class BaseSourceModel(ABC):
    """Interface shared by every source design.

    A model maps the pump parameter mu (mean photon number for a laser,
    mean pair number for down-conversion) to a SourceCharacterization.
    """

    kind: SourceKind

    @abstractmethod
    def characterize(
        self,
        mu: float,
        trig: TriggerDetectorParams | None = None,
        launch_efficiency: float = 1.0,
    ) -> SourceCharacterization:
        """Characterize the source at pump parameter ``mu``.

        Raises:
            InvalidParameterError: If mu is negative or not finite
            DegenerateSourceError: If a triggered source can never fire
        """
        pass


class SourceModelDispatcher:
    """Registry and factory for source models.

    Usage:
        dispatcher = SourceModelDispatcher()
        src = dispatcher('wcp', mu=0.1)

    Key attributes:
        _registry: Class-level dictionary mapping source kinds to model classes
    """

    _registry: dict[SourceKind, type[BaseSourceModel]] = {}

    def __init__(self) -> None:
        self.registry = self._registry

    @classmethod
    def register(cls, kind: SourceKind) -> Callable[[type[BaseSourceModel]], type[BaseSourceModel]]:
        """Register a source model class for ``kind``."""

        def wrapper(new_cls: type[BaseSourceModel]) -> type[BaseSourceModel]:
            new_cls.kind = kind
            cls._registry[kind] = new_cls
            return new_cls

        return wrapper

    def __call__(
        self,
        kind: SourceKind,
        mu: float,
        trig: TriggerDetectorParams | None = None,
        launch_efficiency: float = 1.0,
    ) -> SourceCharacterization:
        """Characterize the source registered under ``kind``.

        Raises:
            UnsupportedSourceError: If no model is registered for ``kind``
        """
        if kind not in self.registry:
            raise UnsupportedSourceError(f'No source model for: {kind}')
        return self.registry[kind]().characterize(mu, trig, launch_efficiency)


@SourceModelDispatcher.register('wcp')
class WeakCoherentSource(BaseSourceModel):
    """Attenuated laser pulse with Poissonian photon number, p_s = 1."""

    @override
    def characterize(
        self,
        mu: float,
        trig: TriggerDetectorParams | None = None,
        launch_efficiency: float = 1.0,
    ) -> SourceCharacterization:
        signal = binomial_thin(poisson_pmf(mu), launch_efficiency)
        return SourceCharacterization(
            kind='wcp', p_s=1.0, s_m=multi_photon_prob(signal), signal_dist=signal
        )


@SourceModelDispatcher.register('cps')
class ClickTriggeredSource(BaseSourceModel):
    """Down-conversion pairs, launched whenever the idler detector clicks."""

    @override
    def characterize(
        self,
        mu: float,
        trig: TriggerDetectorParams | None = None,
        launch_efficiency: float = 1.0,
    ) -> SourceCharacterization:
        if trig is None:
            raise InvalidParameterError('cps source requires trigger parameters')
        pairs = poisson_pmf(mu)
        response = trigger_response(pairs.n_max, trig)
        return _condition_on_trigger('cps', pairs, response.click, launch_efficiency)


@SourceModelDispatcher.register('cps_pnr')
class PNRTriggeredSource(BaseSourceModel):
    """Down-conversion pairs, launched only when the idler detector reports one photon."""

    @override
    def characterize(
        self,
        mu: float,
        trig: TriggerDetectorParams | None = None,
        launch_efficiency: float = 1.0,
    ) -> SourceCharacterization:
        if trig is None:
            raise InvalidParameterError('cps_pnr source requires trigger parameters')
        pairs = poisson_pmf(mu)
        response = trigger_response(pairs.n_max, trig)
        return _condition_on_trigger('cps_pnr', pairs, response.report_one, launch_efficiency)


_dispatcher = SourceModelDispatcher()


def characterize(
    kind: SourceKind,
    mu: float,
    trig: TriggerDetectorParams | None = None,
    launch_efficiency: float = 1.0,
) -> SourceCharacterization:
    """Characterize the source registered under ``kind``."""
    return _dispatcher(kind, mu, trig, launch_efficiency)


def characterize_wcp(mu: float, launch_efficiency: float = 1.0) -> SourceCharacterization:
    """Weak coherent pulse: p_s = 1, signal ~ Poisson(mu)."""
    return _dispatcher('wcp', mu, None, launch_efficiency)


def characterize_cps(
    mu: float, trig: TriggerDetectorParams, launch_efficiency: float = 1.0
) -> SourceCharacterization:
    """Click-triggered pair source; ``trig.discrimination_error`` is ignored."""
    return _dispatcher('cps', mu, trig, launch_efficiency)


def characterize_cps_pnr(
    mu: float, trig: TriggerDetectorParams, launch_efficiency: float = 1.0
) -> SourceCharacterization:
    """Pair source triggered on a PNR report of exactly one photon."""
    return _dispatcher('cps_pnr', mu, trig, launch_efficiency)
