import math
from typing import NamedTuple
from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

__all__ = [
    'Optimum',
    'SweepPoint',
    'ComparisonRow',
    'SWEEP_CSV_COLUMNS',
]


SWEEP_CSV_COLUMNS: tuple[str, ...] = (
    'distance_km',
    'mu_opt',
    'p_s',
    's_m',
    'p_exp',
    'eps',
    'gain',
    'bits_per_sec',
    'secure',
)


def _secure_floor() -> float:
    # Import here to avoid circular imports during module initialization
    from .._utils.config_loaders import load_defaults_config

    return float(load_defaults_config()['optimizer']['secure_floor'])


class Optimum(NamedTuple):
    """Best pump parameter found at one distance."""

    mu_opt: float
    gain_opt: float

    @property
    def secure(self) -> bool:
        return self.gain_opt > _secure_floor()


class SweepPoint(BaseModel):
    """Optimized (or fixed-mu) link figures at one distance."""

    model_config = ConfigDict(frozen=True, extra='forbid', allow_inf_nan=False)

    d_km: float = Field(..., gt=0.0)
    mu_opt: float = Field(..., ge=0.0)
    gain: float = Field(..., ge=0.0, description='Secure bits per pump pulse.')
    bits_per_sec: float = Field(..., ge=0.0)
    rep_rate_hz: float = Field(..., gt=0.0, description='Pump pulses per second.')
    p_s: float = Field(..., ge=0.0, le=1.0)
    s_m: float = Field(..., ge=0.0, le=1.0)
    p_exp: float = Field(..., ge=0.0, le=1.0)
    eps: float = Field(..., ge=0.0, le=1.0)

    @model_validator(mode='after')
    def _check_rate(self) -> Self:
        expected = self.gain * self.rep_rate_hz
        if not math.isclose(self.bits_per_sec, expected, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError(
                f'bits_per_sec={self.bits_per_sec!r} must equal gain x rep_rate_hz ({expected!r})'
            )
        return self

    @property
    def secure(self) -> bool:
        return self.gain > _secure_floor()


class ComparisonRow(NamedTuple):
    """Empirical estimate of one quantity next to its analytic value."""

    quantity: str
    empirical: float
    std_error: float
    analytic: float
    z: float
