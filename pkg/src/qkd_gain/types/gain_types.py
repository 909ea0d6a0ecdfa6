from typing import Literal, TypeAlias, get_args

from pydantic import BaseModel, ConfigDict, Field

__all__ = [
    'FormulaVariant',
    'FORMULA_VARIANTS',
    'DEFAULT_FORMULA_VARIANT',
    'GainInputs',
]


FormulaVariant: TypeAlias = Literal['as_printed', 'single_photon_fraction']
'''as_printed: t = eps * R1; single_photon_fraction: t = eps / R1.'''

# Concrete instance derived from the type - single source of truth
FORMULA_VARIANTS: list[FormulaVariant] = list(get_args(FormulaVariant))

DEFAULT_FORMULA_VARIANT: FormulaVariant = 'single_photon_fraction'


class GainInputs(BaseModel):
    """The four measurable quantities the secure gain depends on."""

    model_config = ConfigDict(frozen=True, extra='forbid', allow_inf_nan=False)

    eps: float = Field(..., ge=0.0, le=1.0, description='Observed error rate.')
    p_s: float = Field(..., ge=0.0, le=1.0, description='Trigger probability.')
    s_m: float = Field(..., ge=0.0, le=1.0, description='Multi-photon probability.')
    p_exp: float = Field(..., ge=0.0, le=1.0, description='Detection probability.')
