"""
pytest configuration for qkd_gain tests.

This file configures the Python path to allow imports from the src directory
and provides the shared detector, receiver and scenario fixtures.
"""

import sys
from pathlib import Path

import pytest

# Add src directory to Python path so we can import qkd_gain
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from qkd_gain._utils import clear_config_cache  # noqa: E402
from qkd_gain.types import (  # noqa: E402
    FiberChannel,
    FreeSpaceChannel,
    ReceiverParams,
    Scenario,
    TriggerDetectorParams,
)

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(autouse=True)
def _fresh_config_cache():
    '''Every test starts from the shipped defaults.json.'''
    clear_config_cache()
    yield
    clear_config_cache()


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def pnr_trigger() -> TriggerDetectorParams:
    '''70% efficient gated PNR trigger, 1e-5 dark per gate, 0.63% misreport.'''
    return TriggerDetectorParams(
        efficiency=0.7, dark_prob_per_gate=1e-5, discrimination_error=0.0063
    )


@pytest.fixture
def ideal_trigger() -> TriggerDetectorParams:
    return TriggerDetectorParams(efficiency=1.0, dark_prob_per_gate=0.0, discrimination_error=0.0)


@pytest.fixture
def fiber_receiver() -> ReceiverParams:
    '''Telecom receiver: efficiency 0.11, 1e-5 dark counts per pulse.'''
    return ReceiverParams(efficiency=0.11, dark_prob_per_pulse=1e-5, baseline_error=0.015)


@pytest.fixture
def fiber_channel() -> FiberChannel:
    return FiberChannel(alpha_db_per_km=0.38)


@pytest.fixture
def make_scenario(pnr_trigger, fiber_channel, fiber_receiver):
    '''Factory for scenarios sharing the fiber defaults; keywords override fields.'''

    def factory(kind='wcp', **overrides) -> Scenario:
        fields = dict(
            source_kind=kind,
            trigger=pnr_trigger,
            channel=fiber_channel,
            receiver=fiber_receiver,
            rep_rate_hz=1e8,
        )
        fields.update(overrides)
        return Scenario(**fields)

    return factory


@pytest.fixture
def identity_channel() -> FreeSpaceChannel:
    '''Unit coupling at and below 1 km.'''
    return FreeSpaceChannel(ref_coupling=1.0, ref_distance_km=1.0)
