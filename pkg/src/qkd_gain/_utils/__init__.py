'''
Internal utilities for the qkd_gain package.

This module contains utility functions for configuration loading and data
conversion. Configuration loading handles JSON defaults and the sectioned
scenario text format, while conversion turns raw documents into validated
scenarios and results into CSV rows.
'''

from .config_loaders import (
    ScenarioDocument,
    load_defaults_config,
    read_scenario_document,
    write_scenario_document,
    clear_config_cache,
)
from .type_converters import (
    nest_section,
    flatten_section,
    validation_error_key,
    scenario_from_document,
    scenario_to_document,
    format_decimal,
    sweep_point_row,
)

__all__ = [
    # Configuration loading
    'ScenarioDocument',
    'load_defaults_config',
    'read_scenario_document',
    'write_scenario_document',
    'clear_config_cache',
    # Conversion and formatting
    'nest_section',
    'flatten_section',
    'validation_error_key',
    'scenario_from_document',
    'scenario_to_document',
    'format_decimal',
    'sweep_point_row',
]
