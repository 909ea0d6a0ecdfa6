"""Pulse-by-pulse Monte Carlo simulation of a scenario.

Every pump pulse is simulated end to end: pair (or photon) generation,
Alice's trigger, internal and channel loss, Bob's detection with background
counts and error assignment. The empirical rates are an independent check
of the analytic source, link and gain modules.

Pulses are processed in fixed-size blocks. Block ``i`` draws from its own
Philox stream seeded with ``SeedSequence([seed, i])``, so the tally does
not depend on how blocks are spread over workers.
"""

import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from tqdm import tqdm

from ._utils import load_defaults_config
from .errors import InvalidParameterError
from .link import total_efficiency
from .optimize import link_budget
from .types import ComparisonRow, Scenario, TrialTally

__all__ = [
    'block_generator',
    'simulate_block',
    'simulate',
    'compare_with_analytic',
]

logger = logging.getLogger(__name__)


def block_generator(seed: int, block_index: int) -> np.random.Generator:
    """Counter-based generator for one block of pulses."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block_index])))


def _triggered_photons(
    scn: Scenario, mu: float, size: int, rng: np.random.Generator
) -> tuple[int, np.ndarray]:
    # Returns (number of triggered pulses, photon numbers of the triggered pulses)
    pairs = rng.poisson(mu, size)
    if scn.source_kind == 'wcp':
        return size, pairs

    trig = scn.trigger
    assert trig is not None
    photoelectrons = rng.binomial(pairs, trig.efficiency)
    counts = photoelectrons + (rng.random(size) < trig.dark_prob_per_gate)

    if scn.source_kind == 'cps':
        triggered = counts > 0
    else:
        wrong = (counts > 0) & (rng.random(size) < trig.discrimination_error)
        step = np.where(rng.random(size) < 0.5, -1, 1)
        reported = counts + wrong * step
        triggered = reported == 1
    return int(np.count_nonzero(triggered)), pairs[triggered]


def simulate_block(
    scn: Scenario, d: float, mu: float, size: int, rng: np.random.Generator
) -> TrialTally:
    """Simulate ``size`` pump pulses with the given generator."""
    n_triggered, photons = _triggered_photons(scn, mu, size, rng)

    launched = rng.binomial(photons, scn.launch_efficiency)
    arriving = rng.binomial(launched, total_efficiency(scn.channel, d, scn.receiver))
    signal_hit = arriving > 0
    background = rng.random(n_triggered) < scn.receiver.dark_prob_per_pulse
    detected = signal_hit | background

    # Signal detections err at the baseline rate, background-only ones half the time
    error_prob = np.where(signal_hit, scn.receiver.baseline_error, 0.5)
    errors = detected & (rng.random(n_triggered) < error_prob)

    return TrialTally(
        n_pulses=size,
        n_triggered=n_triggered,
        n_multi_given_trigger=int(np.count_nonzero(launched >= 2)),
        n_detected_given_trigger=int(np.count_nonzero(detected)),
        n_errors_given_detected=int(np.count_nonzero(errors)),
    )


def simulate(
    scn: Scenario,
    d: float,
    mu: float,
    n_pulses: int,
    seed: int,
    workers: int = 1,
    progress: bool = False,
) -> TrialTally:
    """Simulate ``n_pulses`` pump pulses and tally the events.

    Args:
        scn: Scenario to simulate
        d: Distance in km
        mu: Pump parameter
        n_pulses: Number of pump pulses (at least 1)
        seed: Non-negative seed; identical seeds give identical tallies
        workers: Threads to spread blocks over
        progress: Show a progress bar on stderr

    Raises:
        InvalidParameterError: If n_pulses < 1, seed < 0, or d or mu is out of range
    """
    if n_pulses < 1:
        raise InvalidParameterError(f'n_pulses must be at least 1, got {n_pulses}')
    if seed < 0:
        raise InvalidParameterError(f'seed must be non-negative, got {seed}')
    if not math.isfinite(mu) or mu < 0.0:
        raise InvalidParameterError(f'mu must be a finite non-negative number, got {mu!r}')
    if not math.isfinite(d) or d <= 0.0:
        raise InvalidParameterError(f'd must be a positive distance in km, got {d!r}')

    block_size = load_defaults_config()['montecarlo']['block_size']
    n_blocks = -(-n_pulses // block_size)

    def run(index: int) -> TrialTally:
        size = min(block_size, n_pulses - index * block_size)
        logger.debug('block %d: %d pulses, seed=(%d, %d)', index, size, seed, index)
        return simulate_block(scn, d, mu, size, block_generator(seed, index))

    bar = tqdm(total=n_blocks, desc='montecarlo', unit='block', file=sys.stderr, disable=not progress)
    with bar:
        if workers <= 1:
            tallies = []
            for index in range(n_blocks):
                tallies.append(run(index))
                bar.update()
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                tallies = []
                for tally in pool.map(run, range(n_blocks)):
                    tallies.append(tally)
                    bar.update()

    return sum(tallies, start=TrialTally())


def _z_score(empirical: float, analytic: float, sigma: float) -> float:
    if sigma > 0.0:
        return (empirical - analytic) / sigma
    return 0.0 if math.isclose(empirical, analytic, rel_tol=1e-12, abs_tol=1e-15) else math.inf


def compare_with_analytic(
    tally: TrialTally, scn: Scenario, d: float, mu: float
) -> list[ComparisonRow]:
    """Empirical rates against the analytic pipeline at the same (d, mu).

    The z-score of each rate uses the binomial standard error of the
    analytic probability over the tally's denominator, so rates that are
    exactly 0 or 1 analytically compare exactly. The gain row uses the
    tally's propagated standard error.

    Returns:
        Rows for p_s, s_m, p_exp, eps and gain, in that order
    """
    analytic = link_budget(scn, d, mu)
    denominators = {
        'p_s': tally.n_pulses,
        's_m': tally.n_triggered,
        'p_exp': tally.n_triggered,
        'eps': tally.n_detected_given_trigger,
    }
    stderrs = tally.stderrs()

    rows: list[ComparisonRow] = []
    for name, den in denominators.items():
        expected = float(getattr(analytic, name))
        empirical = float(getattr(tally, name))
        sigma = math.sqrt(expected * (1.0 - expected) / den) if den else 0.0
        rows.append(ComparisonRow(name, empirical, stderrs[name], expected, _z_score(empirical, expected, sigma)))

    estimate = tally.gain(scn.variant, scn.error_correction_factor)
    rows.append(
        ComparisonRow(
            'gain',
            estimate.gain,
            estimate.std_error,
            analytic.gain,
            _z_score(estimate.gain, analytic.gain, estimate.std_error),
        )
    )
    return rows
