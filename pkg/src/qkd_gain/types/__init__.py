from .photon_types import (
    PhotonNumberDistribution as PhotonNumberDistribution,
    NORMALIZATION_TOL as NORMALIZATION_TOL,
)

from .source_types import (
    SourceKind as SourceKind,
    SOURCE_KINDS as SOURCE_KINDS,
    TriggerDetectorParams as TriggerDetectorParams,
    SourceCharacterization as SourceCharacterization,
)

from .link_types import (
    ChannelKind as ChannelKind,
    CHANNEL_KINDS as CHANNEL_KINDS,
    FiberChannel as FiberChannel,
    FreeSpaceChannel as FreeSpaceChannel,
    SatelliteChannel as SatelliteChannel,
    ChannelModel as ChannelModel,
    ReceiverParams as ReceiverParams,
    LinkOutcome as LinkOutcome,
)

from .gain_types import (
    FormulaVariant as FormulaVariant,
    FORMULA_VARIANTS as FORMULA_VARIANTS,
    DEFAULT_FORMULA_VARIANT as DEFAULT_FORMULA_VARIANT,
    GainInputs as GainInputs,
)

from .scenario_types import (
    Scenario as Scenario,
    ScenarioFile as ScenarioFile,
    SourceSection as SourceSection,
    RunSection as RunSection,
    TRIGGERED_SOURCE_KINDS as TRIGGERED_SOURCE_KINDS,
)

from .result_types import (
    Optimum as Optimum,
    SweepPoint as SweepPoint,
    ComparisonRow as ComparisonRow,
    SWEEP_CSV_COLUMNS as SWEEP_CSV_COLUMNS,
)

from .tally_types import (
    TrialTally as TrialTally,
    GainEstimate as GainEstimate,
)

from .default_config import DefaultsConfig as DefaultsConfig

__all__ = [
    # Domain models
    'PhotonNumberDistribution',
    'TriggerDetectorParams',
    'SourceCharacterization',
    'FiberChannel',
    'FreeSpaceChannel',
    'SatelliteChannel',
    'ChannelModel',
    'ReceiverParams',
    'LinkOutcome',
    'GainInputs',
    'Scenario',
    'ScenarioFile',
    'SourceSection',
    'RunSection',
    # Results
    'Optimum',
    'SweepPoint',
    'ComparisonRow',
    'TrialTally',
    'GainEstimate',
    # Type aliases
    'SourceKind',
    'ChannelKind',
    'FormulaVariant',
    'DefaultsConfig',
    # Concrete constants
    'NORMALIZATION_TOL',
    'SOURCE_KINDS',
    'CHANNEL_KINDS',
    'FORMULA_VARIANTS',
    'DEFAULT_FORMULA_VARIANT',
    'TRIGGERED_SOURCE_KINDS',
    'SWEEP_CSV_COLUMNS',
]
