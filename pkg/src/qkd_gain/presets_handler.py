"""Scenario file loading, saving and the shipped preset catalogue."""

import logging
from os import PathLike
from pathlib import Path

from ._utils import (
    read_scenario_document,
    scenario_from_document,
    scenario_to_document,
    write_scenario_document,
)
from .config import PRESET_SUFFIX, PRESETS_DIR_PATH
from .errors import ScenarioConfigError
from .types import Scenario

__all__ = [
    'load_scenario',
    'save_scenario',
    'resolve_scenario',
    'PresetsHandler',
]

logger = logging.getLogger(__name__)


def load_scenario(path: str | PathLike[str]) -> Scenario:
    """Read and validate a scenario file.

    Raises:
        FileNotFoundError: If the file does not exist
        OSError: If the file cannot be read
        ScenarioConfigError: If a key is unknown, missing or invalid
    """
    scn = scenario_from_document(read_scenario_document(path))
    logger.debug('loaded %s scenario from %s', scn.source_kind, path)
    return scn


def save_scenario(scn: Scenario, path: str | PathLike[str], header: str | None = None) -> None:
    """Write ``scn`` with every key explicit; load_scenario reads it back unchanged."""
    write_scenario_document(scenario_to_document(scn), path, header=header)


def resolve_scenario(path_or_preset: str | PathLike[str]) -> Scenario:
    """Load a scenario from a file path, or from a shipped preset of that name.

    An existing file always wins over a preset name. Anything that is
    neither an existing file nor a shipped preset is read as a path, so a
    missing file raises FileNotFoundError.
    """
    candidate = Path(path_or_preset)
    if not candidate.exists() and str(path_or_preset) in PresetsHandler.available_presets():
        return PresetsHandler.load_preset(str(path_or_preset))
    return load_scenario(candidate)


class PresetsHandler:
    """Static handler for the scenario presets shipped with the package.

    Note:
        This class should not be instantiated. All methods are static.

    Usage:
        names = PresetsHandler.available_presets()
        scn = PresetsHandler.load_preset('fiber-cpspnr')
    """

    def __init__(self):
        """Prevent instantiation of this utility class."""
        raise TypeError(
            "PresetsHandler is a utility class and should not be instantiated. "
            "Use its static methods directly."
        )

    @staticmethod
    def available_presets() -> list[str]:
        """Returns the sorted names of the shipped presets."""
        return sorted(p.stem for p in PRESETS_DIR_PATH.glob(f'*{PRESET_SUFFIX}'))

    @staticmethod
    def get_preset_path(name: str) -> Path:
        """Get the file path of a preset.

        Args:
            name: Preset name without suffix (e.g. 'satellite-cps')

        Returns:
            Path to the preset file

        Raises:
            ScenarioConfigError: If no preset has that name
        """
        path = PRESETS_DIR_PATH / f'{name}{PRESET_SUFFIX}'
        if not path.is_file():
            raise ScenarioConfigError(
                f'Preset "{name}" not found. Available: {PresetsHandler.available_presets()}'
            )
        return path

    @staticmethod
    def load_preset(name: str) -> Scenario:
        """Load and validate a shipped preset by name."""
        return load_scenario(PresetsHandler.get_preset_path(name))
