"""Secure gain: perfectly secret key bits per pump pulse."""

import logging
import math

from ._utils import load_defaults_config
from .errors import InvalidParameterError, UndefinedFractionError
from .photon_stats import binary_entropy
from .types import DEFAULT_FORMULA_VARIANT, FORMULA_VARIANTS, FormulaVariant, GainInputs

__all__ = [
    'r1',
    'privacy_fraction',
    'secure_gain',
    'is_secure',
]

logger = logging.getLogger(__name__)


def r1(p_exp: float, s_m: float) -> float:
    """Fraction (p_exp - s_m) / p_exp of detections not attributable to multi-photon pulses.

    Clamped below at 0.

    Raises:
        UndefinedFractionError: If p_exp is 0
    """
    if p_exp <= 0.0:
        raise UndefinedFractionError('R1 is undefined when p_exp = 0')
    return max(0.0, (p_exp - s_m) / p_exp)


def privacy_fraction(eps: float, r_1: float, variant: FormulaVariant) -> float:
    """The -R1 log2(1/2 + 2t - 2t^2) term, t = eps / R1 or eps * R1.

    Returns 0 when the log argument is not positive, and for the
    single_photon_fraction variant whenever t >= 1/2.
    """
    if r_1 <= 0.0:
        return 0.0
    if variant == 'single_photon_fraction':
        t = eps / r_1
        if t >= 0.5:
            return 0.0
    else:
        t = eps * r_1
    argument = 0.5 + 2.0 * t - 2.0 * t * t
    if argument <= 0.0:
        return 0.0
    return -r_1 * math.log2(argument)


def secure_gain(
    inputs: GainInputs,
    variant: FormulaVariant = DEFAULT_FORMULA_VARIANT,
    error_correction_factor: float | None = None,
) -> float:
    """Secure bits per pump pulse.

    G = 1/2 p_s p_exp { -R1 log2(1/2 + 2t - 2t^2) - f H(eps) }, clamped at 0,
    where f is the error-correction inefficiency (1.35 by default).

    Args:
        inputs: Error rate, trigger, multi-photon and detection probabilities
        variant: Which reading of t to use (eps / R1 or eps * R1)
        error_correction_factor: Overrides the configured inefficiency

    Returns:
        Non-negative gain; 0 when p_exp = 0 or R1 = 0

    Raises:
        InvalidParameterError: If the variant is unknown
    """
    if variant not in FORMULA_VARIANTS:
        raise InvalidParameterError(f'unknown formula variant {variant!r}; use one of {FORMULA_VARIANTS}')
    if error_correction_factor is None:
        error_correction_factor = load_defaults_config()['gain']['error_correction_factor']

    if inputs.p_exp <= 0.0:
        return 0.0
    r_1 = r1(inputs.p_exp, inputs.s_m)
    if r_1 <= 0.0:
        return 0.0

    bracket = privacy_fraction(inputs.eps, r_1, variant) - error_correction_factor * binary_entropy(
        inputs.eps
    )
    # p_s factored last so the gain is exactly linear in it
    return inputs.p_s * max(0.0, 0.5 * inputs.p_exp * bracket)


def is_secure(gain: float) -> bool:
    """True when the gain exceeds the configured floating-point floor."""
    return gain > load_defaults_config()['optimizer']['secure_floor']
