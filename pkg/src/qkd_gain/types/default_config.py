from typing import TypedDict

__all__ = [
    'DefaultsConfig',
    'GainDefaults',
    'PhotonStatsDefaults',
    'TriggerDefaults',
    'OptimizerDefaults',
    'MonteCarloDefaults',
    'LoggingDefaults',
]


class GainDefaults(TypedDict):
    error_correction_factor: float


class PhotonStatsDefaults(TypedDict):
    tail_mass: float
    n_max_bounds: list[int]


class TriggerDefaults(TypedDict):
    dark_rate_hz: float
    gate_s: float


class OptimizerDefaults(TypedDict):
    mu_bounds: list[float]
    grid_points: int
    mu_rel_tol: float
    secure_floor: float
    cutoff_tol_km: float


class MonteCarloDefaults(TypedDict):
    block_size: int
    default_pulses: int


class LoggingDefaults(TypedDict):
    level: str
    format: str


class DefaultsConfig(TypedDict, total=False):
    '''Type definition for defaults configuration file.'''

    _comment: str
    _description: str
    _version: str
    _last_updated: str
    gain: GainDefaults
    photon_stats: PhotonStatsDefaults
    trigger: TriggerDefaults
    optimizer: OptimizerDefaults
    montecarlo: MonteCarloDefaults
    logging: LoggingDefaults
