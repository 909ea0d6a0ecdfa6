"""Pump-parameter optimization, distance sweeps and secure-distance cutoffs.

Functions:
    gain_at: Secure gain of a scenario at one distance and pump parameter
    link_budget: All intermediate probabilities at a fixed pump parameter
    optimize_mu: Log-grid search plus golden-section refinement over mu
    sweep_distance: Optimized SweepPoint per distance, optionally in parallel
    sweep_fixed_mu: SweepPoint per distance at one fixed mu
    find_cutoff: Largest distance whose optimized gain reaches a threshold
    calibrate_ref_coupling: Fit a free-space coupling to a target gain
    calibrate_background: Fit background and coupling to a gain and a cutoff
    secret_bits_per_pass: Secret bits gathered over one exposure window
    compare_sources: Optimized figures for several source kinds side by side
"""

import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Iterable, Sequence

import numpy as np
from pydantic import ValidationError
from scipy import optimize as sp_optimize
from tqdm import tqdm

from ._utils import load_defaults_config
from .errors import BracketError, DegenerateSourceError, InvalidParameterError
from .gain import is_secure, secure_gain
from .link import link_outcome
from .sources import characterize
from .types import (
    SOURCE_KINDS,
    FiberChannel,
    GainInputs,
    Optimum,
    Scenario,
    SourceKind,
    SweepPoint,
)

__all__ = [
    'gain_at',
    'link_budget',
    'optimize_mu',
    'sweep_distance',
    'sweep_fixed_mu',
    'find_cutoff',
    'calibrate_ref_coupling',
    'calibrate_background',
    'secret_bits_per_pass',
    'compare_sources',
]

logger = logging.getLogger(__name__)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_COUPLING_SEARCH_FLOOR = 1e-6
_BACKGROUND_SEARCH_FLOOR = 1e-9
_BACKGROUND_SEARCH_CEILING = 1e-1


def _check_mu(mu: float) -> None:
    if not math.isfinite(mu) or mu < 0.0:
        raise InvalidParameterError(f'mu must be a finite non-negative number, got {mu!r}')


def _check_distance(d: float, name: str = 'd') -> None:
    if not math.isfinite(d) or d <= 0.0:
        raise InvalidParameterError(f'{name} must be a positive distance in km, got {d!r}')


def link_budget(scn: Scenario, d: float, mu: float) -> SweepPoint:
    """Source, link and gain figures at distance ``d`` for a fixed pump parameter.

    A source that never triggers yields a point with every probability 0.

    Raises:
        InvalidParameterError: If d or mu is out of range
    """
    _check_distance(d)
    _check_mu(mu)
    try:
        src = characterize(scn.source_kind, mu, scn.trigger, scn.launch_efficiency)
    except DegenerateSourceError as e:
        logger.warning('%s; gain set to 0 at d=%g km, mu=%g', e, d, mu)
        return SweepPoint(
            d_km=d, mu_opt=mu, gain=0.0, bits_per_sec=0.0,
            rep_rate_hz=scn.rep_rate_hz, p_s=0.0, s_m=0.0, p_exp=0.0, eps=0.0
        )

    outcome = link_outcome(src, scn.channel, d, scn.receiver)
    gain = secure_gain(
        GainInputs(eps=outcome.eps, p_s=src.p_s, s_m=src.s_m, p_exp=outcome.p_exp),
        scn.variant,
        error_correction_factor=scn.error_correction_factor,
    )
    return SweepPoint(
        d_km=d,
        mu_opt=mu,
        gain=gain,
        bits_per_sec=gain * scn.rep_rate_hz,
        rep_rate_hz=scn.rep_rate_hz,
        p_s=src.p_s,
        s_m=src.s_m,
        p_exp=outcome.p_exp,
        eps=outcome.eps,
    )


def gain_at(scn: Scenario, d: float, mu: float) -> float:
    """Secure bits per pump pulse at distance ``d`` and pump parameter ``mu``."""
    return link_budget(scn, d, mu).gain


def _golden_section_max(
    f: Callable[[float], float], a: float, b: float, tol: float
) -> tuple[float, float]:
    # Maximizes f on [a, b]; returns the best evaluated (x, f(x))
    dist = b - a
    c = b - _INV_PHI * dist
    e = a + _INV_PHI * dist
    fc, fe = f(c), f(e)
    best = max((fc, -c, c), (fe, -e, e))
    while dist > tol:
        if fc >= fe:
            b, e, fe = e, c, fc
            dist = b - a
            c = b - _INV_PHI * dist
            fc = f(c)
            best = max(best, (fc, -c, c))
        else:
            a, c, fc = c, e, fe
            dist = b - a
            e = a + _INV_PHI * dist
            fe = f(e)
            best = max(best, (fe, -e, e))
    return best[2], best[0]


def optimize_mu(scn: Scenario, d: float) -> Optimum:
    """Pump parameter maximizing the secure gain at distance ``d``.

    A log-spaced grid over ``scn.mu_bounds`` locates the best cell; a
    golden-section search in log mu refines it between the neighbouring
    grid points. The grid optimum is kept when refinement does worse.

    Returns:
        Optimum(mu_opt, gain_opt); (lower bound, 0) when no grid point has
        positive gain
    """
    _check_distance(d)
    settings = load_defaults_config()['optimizer']
    lo, hi = scn.mu_bounds

    grid = np.geomspace(lo, hi, settings['grid_points'])
    gains = np.array([gain_at(scn, d, float(mu)) for mu in grid])
    best = int(np.argmax(gains))
    if gains[best] <= 0.0:
        logger.debug('no positive gain on the mu grid at d=%g km', d)
        return Optimum(lo, 0.0)
    logger.debug('grid optimum at d=%g km: mu=%g gain=%g', d, grid[best], gains[best])

    left = math.log(grid[max(best - 1, 0)])
    right = math.log(grid[min(best + 1, grid.size - 1)])
    log_mu, refined = _golden_section_max(
        lambda x: gain_at(scn, d, math.exp(x)), left, right, settings['mu_rel_tol']
    )
    if refined < gains[best]:
        logger.debug('golden section underperformed the grid at d=%g km; keeping grid point', d)
        return Optimum(float(grid[best]), float(gains[best]))
    return Optimum(math.exp(log_mu), refined)


def _optimized_point(scn: Scenario, d: float) -> SweepPoint:
    optimum = optimize_mu(scn, d)
    return link_budget(scn, d, optimum.mu_opt)


def _check_distances(d_values: Sequence[float]) -> None:
    for d in d_values:
        _check_distance(d)
    if any(b < a for a, b in zip(d_values, d_values[1:])):
        raise InvalidParameterError('distances must be in ascending order')


def _run_ordered(
    task: Callable[[float], SweepPoint],
    d_values: Sequence[float],
    workers: int,
    progress: bool,
    desc: str,
) -> list[SweepPoint]:
    bar = partial(tqdm, total=len(d_values), desc=desc, unit='pt', file=sys.stderr, disable=not progress)
    if workers <= 1:
        return [task(d) for d in bar(d_values)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves input order regardless of completion order
        return list(bar(pool.map(task, d_values)))


def sweep_distance(
    scn: Scenario,
    d_values: Iterable[float],
    workers: int = 1,
    progress: bool = False,
) -> list[SweepPoint]:
    """Optimized SweepPoint at each distance, in input order.

    Args:
        scn: Scenario to evaluate
        d_values: Positive distances in km, ascending
        workers: Processes to spread the distances over (1 runs serially)
        progress: Show a progress bar on stderr

    Returns:
        One SweepPoint per distance; identical for any worker count

    Raises:
        InvalidParameterError: If a distance is not positive or the list is not ascending
    """
    distances = [float(d) for d in d_values]
    _check_distances(distances)
    points = _run_ordered(partial(_optimized_point, scn), distances, workers, progress, 'sweep')
    logger.info(
        'swept %d distances for %s: %d secure', len(points), scn.source_kind,
        sum(p.secure for p in points),
    )
    return points


def sweep_fixed_mu(
    scn: Scenario,
    d_values: Iterable[float],
    mu: float,
    workers: int = 1,
    progress: bool = False,
) -> list[SweepPoint]:
    """SweepPoint at each distance with the pump parameter held at ``mu``."""
    _check_mu(mu)
    distances = [float(d) for d in d_values]
    _check_distances(distances)
    task = partial(_fixed_mu_point, scn, mu)
    return _run_ordered(task, distances, workers, progress, f'sweep mu={mu:g}')


def _fixed_mu_point(scn: Scenario, mu: float, d: float) -> SweepPoint:
    return link_budget(scn, d, mu)


def find_cutoff(scn: Scenario, g_min: float, d_lo: float, d_hi: float) -> float:
    """Largest distance whose optimized gain is at least ``g_min`` and secure.

    Bisection on the optimized gain down to the configured distance
    tolerance (0.05 km by default).

    Raises:
        InvalidParameterError: If the bracket is not positive and increasing or g_min < 0
        BracketError: If d_lo does not pass or d_hi does not fail the threshold
    """
    _check_distance(d_lo, 'd_lo')
    _check_distance(d_hi, 'd_hi')
    if d_hi <= d_lo:
        raise InvalidParameterError(f'd_hi must exceed d_lo, got [{d_lo}, {d_hi}]')
    if not math.isfinite(g_min) or g_min < 0.0:
        raise InvalidParameterError(f'g_min must be a non-negative gain, got {g_min!r}')

    def passes(d: float) -> bool:
        gain = optimize_mu(scn, d).gain_opt
        return gain >= g_min and is_secure(gain)

    if not passes(d_lo):
        raise BracketError(f'gain at d_lo={d_lo} km is already below {g_min}')
    if passes(d_hi):
        raise BracketError(f'gain at d_hi={d_hi} km is still at least {g_min}')

    tol = load_defaults_config()['optimizer']['cutoff_tol_km']
    lo, hi = d_lo, d_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
        logger.debug('cutoff bracket [%g, %g] km', lo, hi)
    logger.info('cutoff for %s at g_min=%g: %g km', scn.source_kind, g_min, lo)
    return lo


def calibrate_ref_coupling(scn: Scenario, d_ref: float, target_gain: float) -> float:
    """Reference coupling that makes the optimized gain at ``d_ref`` equal ``target_gain``.

    Only free-space and satellite channels carry a reference coupling. The
    root is found with Brent's method on log(coupling) over [1e-6, 1].

    Raises:
        InvalidParameterError: For fiber channels or a non-positive target
        BracketError: If the target is unreachable within the coupling range
    """
    _check_distance(d_ref, 'd_ref')
    if isinstance(scn.channel, FiberChannel):
        raise InvalidParameterError('calibration needs a freespace or satellite channel')
    if not math.isfinite(target_gain) or target_gain <= 0.0:
        raise InvalidParameterError(f'target_gain must be positive, got {target_gain!r}')

    def with_coupling(log_coupling: float) -> Scenario:
        chan = scn.channel.model_copy(update={'ref_coupling': math.exp(log_coupling)})
        return scn.model_copy(update={'channel': chan})

    def residual(log_coupling: float) -> float:
        return optimize_mu(with_coupling(log_coupling), d_ref).gain_opt - target_gain

    lower, upper = math.log(_COUPLING_SEARCH_FLOOR), 0.0
    if residual(lower) > 0.0 or residual(upper) < 0.0:
        raise BracketError(
            f'target gain {target_gain} at {d_ref} km is outside the reachable range'
        )
    root = sp_optimize.brentq(residual, lower, upper, xtol=1e-10)
    coupling = math.exp(root)
    logger.info('calibrated ref_coupling=%.10g for gain %g at %g km', coupling, target_gain, d_ref)
    return coupling


def calibrate_background(
    scn: Scenario,
    d_ref: float,
    target_gain: float,
    cutoff_kind: SourceKind,
    cutoff_km: float,
) -> tuple[float, float]:
    """Background and coupling that pin both a reference gain and a cutoff.

    The receiver's background probability is chosen so that ``cutoff_kind``
    stops being secure at ``cutoff_km``, while the reference coupling is
    refitted at every step so that ``scn`` keeps ``target_gain`` at ``d_ref``.
    Brent's method runs on log(background); the upper end of the bracket
    climbs a decade at a time from 1e-9.

    Returns:
        (dark_prob_per_pulse, ref_coupling)

    Raises:
        InvalidParameterError: For fiber channels, bad targets, or a triggered
            ``cutoff_kind`` without trigger parameters
        BracketError: If no background in [1e-9, 1e-1] places the cutoff at ``cutoff_km``
    """
    _check_distance(cutoff_km, 'cutoff_km')
    if isinstance(scn.channel, FiberChannel):
        raise InvalidParameterError('calibration needs a freespace or satellite channel')
    floor = load_defaults_config()['optimizer']['secure_floor']

    def fitted(log_dark: float) -> Scenario:
        rx = scn.receiver.model_copy(update={'dark_prob_per_pulse': math.exp(log_dark)})
        noisy = scn.model_copy(update={'receiver': rx})
        chan = noisy.channel.model_copy(
            update={'ref_coupling': calibrate_ref_coupling(noisy, d_ref, target_gain)}
        )
        return noisy.model_copy(update={'channel': chan})

    def residual(log_dark: float) -> float:
        try:
            at_cutoff = fitted(log_dark).with_kind(cutoff_kind)
        except ValidationError as e:
            raise InvalidParameterError(
                f'cannot evaluate {cutoff_kind}: {e.errors()[0]["msg"]}'
            ) from e
        return optimize_mu(at_cutoff, cutoff_km).gain_opt - floor

    lower = math.log(_BACKGROUND_SEARCH_FLOOR)
    if residual(lower) <= 0.0:
        raise BracketError(
            f'{cutoff_kind} is not secure at {cutoff_km} km even with background '
            f'{_BACKGROUND_SEARCH_FLOOR:g}'
        )
    upper = lower
    while True:
        upper += math.log(10.0)
        if upper > math.log(_BACKGROUND_SEARCH_CEILING) + 1e-9:
            raise BracketError(
                f'{cutoff_kind} stays secure at {cutoff_km} km up to background '
                f'{_BACKGROUND_SEARCH_CEILING:g}'
            )
        if residual(upper) < 0.0:
            break
        lower = upper
    root = sp_optimize.brentq(residual, lower, upper, xtol=1e-4)
    dark = math.exp(root)
    coupling = fitted(root).channel.ref_coupling
    logger.info(
        'calibrated dark_per_pulse=%.6g ref_coupling=%.10g (cutoff of %s at %g km)',
        dark,
        coupling,
        cutoff_kind,
        cutoff_km,
    )
    return dark, coupling


def secret_bits_per_pass(scn: Scenario, d: float, exposure_s: float) -> float:
    """Optimized secret bits accumulated over one exposure of ``exposure_s`` seconds."""
    if not math.isfinite(exposure_s) or exposure_s <= 0.0:
        raise InvalidParameterError(f'exposure_s must be positive, got {exposure_s!r}')
    return optimize_mu(scn, d).gain_opt * scn.rep_rate_hz * exposure_s


def compare_sources(
    scn: Scenario, d: float, kinds: Sequence[SourceKind] = tuple(SOURCE_KINDS)
) -> dict[SourceKind, SweepPoint]:
    """Optimized SweepPoint for each source kind with every other parameter shared.

    Raises:
        InvalidParameterError: If a triggered kind is requested without trigger parameters
    """
    results: dict[SourceKind, SweepPoint] = {}
    for kind in kinds:
        try:
            variant = scn.with_kind(kind)
        except ValidationError as e:
            raise InvalidParameterError(f'cannot evaluate {kind}: {e.errors()[0]["msg"]}') from e
        results[kind] = _optimized_point(variant, d)
    return results
