"""Scenario types: the validated run description and its on-disk file shape.

``ScenarioFile`` mirrors the sectioned key = value document one to one, so
validation errors point at the key a user typed. ``Scenario`` is the flat
value every library operation consumes.
"""

from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .gain_types import DEFAULT_FORMULA_VARIANT, FormulaVariant
from .link_types import ChannelModel, ReceiverParams
from .source_types import SourceKind, TriggerDetectorParams

__all__ = [
    'TRIGGERED_SOURCE_KINDS',
    'Scenario',
    'SourceSection',
    'RunSection',
    'ScenarioFile',
]

TRIGGERED_SOURCE_KINDS: frozenset[SourceKind] = frozenset({'cps', 'cps_pnr'})


def _default_mu_bounds() -> tuple[float, float]:
    # Import here to avoid circular imports during module initialization
    from .._utils.config_loaders import load_defaults_config

    lo, hi = load_defaults_config()['optimizer']['mu_bounds']
    return float(lo), float(hi)


def _default_error_correction_factor() -> float:
    from .._utils.config_loaders import load_defaults_config

    return float(load_defaults_config()['gain']['error_correction_factor'])


def _canonical_variant(value: object) -> object:
    if isinstance(value, str):
        return value.strip().lower().replace('-', '_')
    return value


class Scenario(BaseModel):
    """Everything needed to evaluate the secure gain of one link design.

    ``trigger`` is optional for ``wcp`` and required for the triggered
    kinds; a WCP scenario may still carry one so the same scenario can be
    re-run with another source kind (see ``with_kind``).
    """

    model_config = ConfigDict(frozen=True, extra='forbid', allow_inf_nan=False)

    source_kind: SourceKind
    trigger: TriggerDetectorParams | None = None
    channel: ChannelModel
    receiver: ReceiverParams
    rep_rate_hz: float = Field(..., gt=0.0, description='Pump pulse rate in Hz.')
    variant: FormulaVariant = DEFAULT_FORMULA_VARIANT
    mu_bounds: tuple[float, float] = Field(default_factory=_default_mu_bounds)
    launch_efficiency: float = Field(
        1.0, ge=0.0, le=1.0, description="Signal survival inside Alice's apparatus."
    )
    error_correction_factor: float = Field(
        default_factory=_default_error_correction_factor,
        gt=0.0,
        description='Error-correction inefficiency multiplying the entropy term.',
    )

    @field_validator('variant', mode='before')
    @classmethod
    def _normalize_variant(cls, value: object) -> object:
        return _canonical_variant(value)

    @model_validator(mode='after')
    def _check_consistency(self) -> Self:
        lo, hi = self.mu_bounds
        if not 0.0 < lo < hi:
            raise ValueError(f'mu_bounds must satisfy 0 < lo < hi, got {self.mu_bounds!r}')
        if self.source_kind in TRIGGERED_SOURCE_KINDS and self.trigger is None:
            raise ValueError(f'source kind {self.source_kind!r} requires trigger parameters')
        return self

    def with_kind(self, kind: SourceKind) -> 'Scenario':
        """Return the same scenario with a different source kind."""
        return type(self).model_validate({**self.__dict__, 'source_kind': kind})

    def with_variant(self, variant: FormulaVariant) -> 'Scenario':
        """Return the same scenario evaluated under another gain formula variant."""
        return type(self).model_validate({**self.__dict__, 'variant': variant})


class SourceSection(BaseModel):
    """``[source]`` section of a scenario file."""

    model_config = ConfigDict(extra='forbid', allow_inf_nan=False)

    kind: SourceKind
    trigger: TriggerDetectorParams | None = None
    launch_efficiency: float = Field(1.0, ge=0.0, le=1.0)


class RunSection(BaseModel):
    """``[run]`` section of a scenario file."""

    model_config = ConfigDict(extra='forbid', allow_inf_nan=False)

    rep_rate_hz: float = Field(..., gt=0.0)
    formula_variant: FormulaVariant | None = None
    mu_lo: float | None = Field(None, gt=0.0)
    mu_hi: float | None = Field(None, gt=0.0)
    error_correction_factor: float | None = Field(None, gt=0.0)

    @field_validator('formula_variant', mode='before')
    @classmethod
    def _normalize_variant(cls, value: object) -> object:
        return _canonical_variant(value)


class ScenarioFile(BaseModel):
    """Nested form of a ``[source] [channel] [receiver] [run]`` scenario document."""

    model_config = ConfigDict(extra='forbid', allow_inf_nan=False)

    source: SourceSection
    channel: ChannelModel
    receiver: ReceiverParams
    run: RunSection
