'''
Configuration file loading utilities.

This module provides functions for loading and caching the library defaults
and for reading and writing sectioned scenario documents with proper error
handling and type safety.
'''

import json
import configparser
from os import PathLike
from pathlib import Path
from typing import cast
from functools import lru_cache

from ..config import DEFAULTS_FILE_PATH
from ..errors import ScenarioConfigError
from ..types import DefaultsConfig


__all__ = [
    'ScenarioDocument',
    'load_defaults_config',
    'read_scenario_document',
    'write_scenario_document',
    'clear_config_cache',
]

ScenarioDocument = dict[str, dict[str, str]]
'''Raw scenario text: section name -> (dotted key -> value string).'''


@lru_cache(maxsize=1)
def load_defaults_config() -> DefaultsConfig:
    '''
    Load and cache default configuration from JSON file.

    Returns:
        Dictionary containing default configuration values

    Raises:
        ValueError: If file is missing or contains invalid JSON
    '''
    try:
        with open(DEFAULTS_FILE_PATH, 'r', encoding='utf-8') as f:
            return cast(DefaultsConfig, json.load(f))
    except (FileNotFoundError, json.JSONDecodeError) as e:
        raise ValueError(
            f'Failed to load defaults config from {DEFAULTS_FILE_PATH}: {e}'
        ) from e


def _new_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(
        interpolation=None, delimiters=('=',), comment_prefixes=('#', ';')
    )
    # Keys are case sensitive (alpha_db_per_km, rep_rate_hz, ...)
    parser.optionxform = str  # type: ignore[assignment, method-assign]
    return parser


def read_scenario_document(path: str | PathLike[str]) -> ScenarioDocument:
    '''
    Read a scenario file into its raw sectioned form.

    Args:
        path: Location of the ``key = value`` scenario file

    Returns:
        Mapping of section name to its (dotted key -> value string) pairs

    Raises:
        FileNotFoundError: If the file does not exist
        OSError: If the file cannot be read
        ScenarioConfigError: If the text is not a valid sectioned document
    '''
    parser = _new_parser()
    with open(path, 'r', encoding='utf-8') as f:
        try:
            parser.read_file(f)
        except configparser.MissingSectionHeaderError as e:
            raise ScenarioConfigError(
                f'{path}: keys must appear under a [section] header (line {e.lineno})'
            ) from e
        except configparser.DuplicateOptionError as e:
            raise ScenarioConfigError(
                f'{path}: key defined twice in [{e.section}]', key=f'{e.section}.{e.option}'
            ) from e
        except configparser.DuplicateSectionError as e:
            raise ScenarioConfigError(
                f'{path}: section [{e.section}] defined twice', key=e.section
            ) from e
        except configparser.Error as e:
            raise ScenarioConfigError(f'{path}: {e}') from e

    return {section: dict(parser.items(section)) for section in parser.sections()}


def write_scenario_document(
    document: ScenarioDocument, path: str | PathLike[str], header: str | None = None
) -> None:
    '''
    Write a raw scenario document to disk.

    Args:
        document: Mapping of section name to (dotted key -> value string)
        path: Destination file
        header: Optional comment block written above the first section

    Raises:
        OSError: If the destination cannot be written
    '''
    parser = _new_parser()
    for section, values in document.items():
        parser[section] = values

    with open(Path(path), 'w', encoding='utf-8', newline='\n') as f:
        if header:
            for line in header.splitlines():
                f.write(f'# {line}\n' if line else '#\n')
            f.write('\n')
        parser.write(f)


def clear_config_cache() -> None:
    '''
    Clear all configuration caches.

    This is useful for testing or when configuration files are updated
    and you need to reload them.
    '''
    load_defaults_config.cache_clear()
