'''qkd_gain package - secure-gain calculator and simulator for BB84

This package computes the number of perfectly secret key bits per pump pulse
for BB84 links fed by a weak coherent pulse (WCP), a correlated photon pair
source heralded by a click/no-click detector (CPS), or one heralded by a
photon-number-resolving detector (CPS/PNR), over fiber, free-space and
satellite channels.

Main Components:
- Scenario: validated description of one link design
- optimize_mu / sweep_distance / find_cutoff: optimization over pump power
- simulate: pulse-level Monte Carlo check of the analytic pipeline
- PresetsHandler: the nine shipped scenarios

Usage:
    from qkd_gain import PresetsHandler, optimize_mu

    scn = PresetsHandler.load_preset('fiber-cpspnr')
    mu_opt, gain = optimize_mu(scn, 50.0)
'''

# Version information
__version__ = '1.0.0'
__author__ = 'QKD Gain Team'
__description__ = 'Secure-gain calculator and simulator for BB84 with WCP, CPS and CPS/PNR sources'

from .errors import (
    QKDGainError,
    InvalidParameterError,
    DegenerateSourceError,
    UndefinedFractionError,
    BracketError,
    UnsupportedSourceError,
    ScenarioConfigError,
)
from .types import (
    PhotonNumberDistribution,
    TriggerDetectorParams,
    SourceCharacterization,
    FiberChannel,
    FreeSpaceChannel,
    SatelliteChannel,
    ReceiverParams,
    LinkOutcome,
    GainInputs,
    Scenario,
    Optimum,
    SweepPoint,
    TrialTally,
)
from .photon_stats import poisson_pmf, binomial_thin, multi_photon_prob, binary_entropy
from .sources import (
    SourceModelDispatcher,
    characterize_wcp,
    characterize_cps,
    characterize_cps_pnr,
    pnr_report_distribution,
)
from .link import transmittance, link_outcome
from .gain import r1, secure_gain
from .optimize import (
    gain_at,
    optimize_mu,
    sweep_distance,
    find_cutoff,
    calibrate_background,
    calibrate_ref_coupling,
    compare_sources,
)
from .montecarlo import simulate, compare_with_analytic
from .presets_handler import PresetsHandler, load_scenario, save_scenario


# Explicitly define what gets exported
__all__ = [
    # Errors
    'QKDGainError',
    'InvalidParameterError',
    'DegenerateSourceError',
    'UndefinedFractionError',
    'BracketError',
    'UnsupportedSourceError',
    'ScenarioConfigError',
    # Types
    'PhotonNumberDistribution',
    'TriggerDetectorParams',
    'SourceCharacterization',
    'FiberChannel',
    'FreeSpaceChannel',
    'SatelliteChannel',
    'ReceiverParams',
    'LinkOutcome',
    'GainInputs',
    'Scenario',
    'Optimum',
    'SweepPoint',
    'TrialTally',
    # Operations
    'poisson_pmf',
    'binomial_thin',
    'multi_photon_prob',
    'binary_entropy',
    'SourceModelDispatcher',
    'characterize_wcp',
    'characterize_cps',
    'characterize_cps_pnr',
    'pnr_report_distribution',
    'transmittance',
    'link_outcome',
    'r1',
    'secure_gain',
    'gain_at',
    'optimize_mu',
    'sweep_distance',
    'find_cutoff',
    'calibrate_ref_coupling',
    'calibrate_background',
    'compare_sources',
    'simulate',
    'compare_with_analytic',
    'PresetsHandler',
    'load_scenario',
    'save_scenario',
]
