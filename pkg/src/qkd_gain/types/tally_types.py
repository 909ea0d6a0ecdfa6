"""Event counts collected by the Monte Carlo pulse simulator."""

import math
from typing import NamedTuple
from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .gain_types import DEFAULT_FORMULA_VARIANT, FormulaVariant

__all__ = [
    'TrialTally',
    'GainEstimate',
]


class GainEstimate(NamedTuple):
    gain: float
    std_error: float


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _binomial_stderr(num: int, den: int) -> float:
    if den == 0:
        return 0.0
    p = num / den
    return math.sqrt(p * (1.0 - p) / den)


class TrialTally(BaseModel):
    """Nested event counts over ``n_pulses`` simulated pump pulses.

    Each count is conditional on the previous stage: multi-photon pulses and
    detections are counted among triggered pulses, errors among detections.
    Tallies merge associatively, so block results can be summed in any
    grouping.
    """

    model_config = ConfigDict(frozen=True, extra='forbid')

    n_pulses: int = Field(0, ge=0)
    n_triggered: int = Field(0, ge=0)
    n_multi_given_trigger: int = Field(0, ge=0)
    n_detected_given_trigger: int = Field(0, ge=0)
    n_errors_given_detected: int = Field(0, ge=0)

    @model_validator(mode='after')
    def _check_nesting(self) -> Self:
        if self.n_triggered > self.n_pulses:
            raise ValueError('n_triggered cannot exceed n_pulses')
        if self.n_multi_given_trigger > self.n_triggered:
            raise ValueError('n_multi_given_trigger cannot exceed n_triggered')
        if self.n_detected_given_trigger > self.n_triggered:
            raise ValueError('n_detected_given_trigger cannot exceed n_triggered')
        if self.n_errors_given_detected > self.n_detected_given_trigger:
            raise ValueError('n_errors_given_detected cannot exceed n_detected_given_trigger')
        return self

    def merge(self, other: 'TrialTally') -> 'TrialTally':
        """Combine the counts of two disjoint sets of pulses."""
        return TrialTally(
            n_pulses=self.n_pulses + other.n_pulses,
            n_triggered=self.n_triggered + other.n_triggered,
            n_multi_given_trigger=self.n_multi_given_trigger + other.n_multi_given_trigger,
            n_detected_given_trigger=self.n_detected_given_trigger
            + other.n_detected_given_trigger,
            n_errors_given_detected=self.n_errors_given_detected
            + other.n_errors_given_detected,
        )

    def __add__(self, other: 'TrialTally') -> 'TrialTally':
        return self.merge(other)

    @property
    def p_s(self) -> float:
        return _ratio(self.n_triggered, self.n_pulses)

    @property
    def s_m(self) -> float:
        return _ratio(self.n_multi_given_trigger, self.n_triggered)

    @property
    def p_exp(self) -> float:
        return _ratio(self.n_detected_given_trigger, self.n_triggered)

    @property
    def eps(self) -> float:
        return _ratio(self.n_errors_given_detected, self.n_detected_given_trigger)

    def stderrs(self) -> dict[str, float]:
        """Binomial standard errors of the four empirical rates."""
        return {
            'p_s': _binomial_stderr(self.n_triggered, self.n_pulses),
            's_m': _binomial_stderr(self.n_multi_given_trigger, self.n_triggered),
            'p_exp': _binomial_stderr(self.n_detected_given_trigger, self.n_triggered),
            'eps': _binomial_stderr(
                self.n_errors_given_detected, self.n_detected_given_trigger
            ),
        }

    def gain(
        self,
        variant: FormulaVariant = DEFAULT_FORMULA_VARIANT,
        error_correction_factor: float | None = None,
    ) -> GainEstimate:
        """Secure gain of the empirical rates with a first-order propagated error.

        The standard error combines the four rate errors through a central
        finite-difference Jacobian of the gain formula, treating the rates
        as independent.
        """
        # Import here to avoid circular imports during module initialization
        from ..gain import secure_gain
        from .gain_types import GainInputs

        rates = {'eps': self.eps, 'p_s': self.p_s, 's_m': self.s_m, 'p_exp': self.p_exp}

        def evaluate(values: dict[str, float]) -> float:
            return secure_gain(
                GainInputs(**values), variant, error_correction_factor=error_correction_factor
            )

        centre = evaluate(rates)
        variance = 0.0
        for name, sigma in self.stderrs().items():
            if sigma == 0.0:
                continue
            step = max(1e-9, 1e-3 * sigma)
            up = dict(rates, **{name: min(1.0, rates[name] + step)})
            down = dict(rates, **{name: max(0.0, rates[name] - step)})
            width = up[name] - down[name]
            if width <= 0.0:
                continue
            slope = (evaluate(up) - evaluate(down)) / width
            variance += (slope * sigma) ** 2
        return GainEstimate(centre, math.sqrt(variance))
