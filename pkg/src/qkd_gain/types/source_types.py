from typing import Literal, TypeAlias, get_args
from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .photon_types import PhotonNumberDistribution


__all__ = [
    'SourceKind',
    'SOURCE_KINDS',
    'TriggerDetectorParams',
    'SourceCharacterization',
]


SourceKind: TypeAlias = Literal['wcp', 'cps', 'cps_pnr']
'''wcp: attenuated laser; cps: click/no-click triggered pairs; cps_pnr: number-resolving trigger.'''

# Concrete instance derived from the type - single source of truth
SOURCE_KINDS: list[SourceKind] = list(get_args(SourceKind))

S_M_CONSISTENCY_TOL: float = 1e-9


def _default_dark_prob_per_gate() -> float:
    # Import here to avoid circular imports during module initialization
    from .._utils.config_loaders import load_defaults_config

    trigger = load_defaults_config()['trigger']
    return _dark_prob_from_rate(trigger['dark_rate_hz'], trigger['gate_s'])


def _dark_prob_from_rate(dark_rate_hz: float, gate_s: float) -> float:
    """Per-gate dark probability of a detector with ``dark_rate_hz`` counts per second."""
    return dark_rate_hz * gate_s


class TriggerDetectorParams(BaseModel):
    """Alice's idler-arm detector, gated once per pump pulse."""

    model_config = ConfigDict(frozen=True, extra='forbid', allow_inf_nan=False)

    efficiency: float = Field(
        ..., ge=0.0, le=1.0, description='Probability a photon yields a photoelectron.'
    )
    dark_prob_per_gate: float = Field(
        default_factory=_default_dark_prob_per_gate,
        ge=0.0,
        le=1.0,
        description='Probability of a spurious count within one gate.',
    )
    discrimination_error: float = Field(
        0.0,
        ge=0.0,
        le=1.0,
        description='Probability the reported count differs from the photoelectron count.',
    )

    @classmethod
    def from_rate(
        cls,
        efficiency: float,
        dark_rate_hz: float,
        gate_s: float,
        discrimination_error: float = 0.0,
    ) -> 'TriggerDetectorParams':
        """Build parameters from a dark count rate and a gate duration."""
        return cls(
            efficiency=efficiency,
            dark_prob_per_gate=_dark_prob_from_rate(dark_rate_hz, gate_s),
            discrimination_error=discrimination_error,
        )


class SourceCharacterization(BaseModel):
    """Trigger rate and launched-pulse statistics of one source design.

    s_m and signal_dist are conditional on Alice's trigger; p_s carries the
    per-pump-pulse trigger probability.
    """

    model_config = ConfigDict(frozen=True, extra='forbid', allow_inf_nan=False)

    kind: SourceKind
    p_s: float = Field(..., ge=0.0, le=1.0, description='Trigger probability per pump pulse.')
    s_m: float = Field(
        ..., ge=0.0, le=1.0, description='Multi-photon probability of a launched pulse.'
    )
    signal_dist: PhotonNumberDistribution

    @model_validator(mode='after')
    def _check_multi_photon_consistency(self) -> Self:
        expected = 1.0 - self.signal_dist[0] - self.signal_dist[1]
        if abs(self.s_m - expected) > S_M_CONSISTENCY_TOL:
            raise ValueError(
                f's_m={self.s_m!r} disagrees with its signal distribution ({expected!r})'
            )
        return self
