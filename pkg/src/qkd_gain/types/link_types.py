from typing import Annotated, Literal, TypeAlias, get_args
from typing_extensions import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

__all__ = [
    'ChannelKind',
    'CHANNEL_KINDS',
    'FiberChannel',
    'FreeSpaceChannel',
    'SatelliteChannel',
    'ChannelModel',
    'ReceiverParams',
    'LinkOutcome',
]


ChannelKind: TypeAlias = Literal['fiber', 'freespace', 'satellite']

# Concrete instance derived from the type - single source of truth
CHANNEL_KINDS: list[ChannelKind] = list(get_args(ChannelKind))

_FROZEN = ConfigDict(frozen=True, extra='forbid', allow_inf_nan=False)


class FiberChannel(BaseModel):
    """Optical fiber with exponential attenuation."""

    model_config = _FROZEN

    kind: Literal['fiber'] = 'fiber'
    alpha_db_per_km: float = Field(..., ge=0.0, description='Attenuation in dB/km.')
    fixed_loss_db: float = Field(
        0.0, ge=0.0, description='Distance-independent insertion loss in dB.'
    )


class FreeSpaceChannel(BaseModel):
    """Ground-to-ground free-space link with diffraction-limited 1/d^2 coupling."""

    model_config = _FROZEN

    kind: Literal['freespace'] = 'freespace'
    ref_coupling: float = Field(..., gt=0.0, le=1.0, description='Coupling at ref_distance_km.')
    ref_distance_km: float = Field(..., gt=0.0, description='Calibration distance in km.')


class SatelliteChannel(BaseModel):
    """Ground-to-satellite link, scaled as 1/d^2 from a reference altitude."""

    model_config = _FROZEN

    kind: Literal['satellite'] = 'satellite'
    ref_coupling: float = Field(..., gt=0.0, le=1.0, description='Coupling at ref_distance_km.')
    ref_distance_km: float = Field(..., gt=0.0, description='Calibration distance in km.')


ChannelModel: TypeAlias = Annotated[
    FiberChannel | FreeSpaceChannel | SatelliteChannel,
    Field(discriminator='kind'),
]
'''Tagged channel variant, selected by its ``kind`` field.'''


class ReceiverParams(BaseModel):
    """Bob's gated detection unit."""

    model_config = ConfigDict(
        frozen=True, extra='forbid', allow_inf_nan=False, populate_by_name=True
    )

    efficiency: float = Field(..., ge=0.0, le=1.0, description='Detector quantum efficiency.')
    dark_prob_per_pulse: float = Field(
        ...,
        ge=0.0,
        le=1.0,
        alias='dark_per_pulse',
        description='Background plus dark count probability per gated pulse.',
    )
    baseline_error: float = Field(
        ..., ge=0.0, le=1.0, description='Misalignment error on true signal detections.'
    )


class LinkOutcome(BaseModel):
    """Detection statistics at Bob for one triggered pulse."""

    model_config = _FROZEN

    p_exp: float = Field(..., ge=0.0, le=1.0, description='Detection probability.')
    eps: float = Field(..., ge=0.0, le=1.0, description='Error rate conditional on detection.')
    p_signal: float = Field(..., ge=0.0, le=1.0, description='Signal-only detection probability.')

    @model_validator(mode='after')
    def _check_ordering(self) -> Self:
        if self.p_signal > self.p_exp + 1e-15:
            raise ValueError('p_signal cannot exceed p_exp')
        return self
