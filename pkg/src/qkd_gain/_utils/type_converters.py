'''
Conversion utilities between raw scenario documents, typed scenarios and
tabular output.

Loading and caching of files is handled by config_loaders.py; everything
here works on already-read data.
'''

from typing import Any, Mapping

import numpy as np
from pydantic import ValidationError
from pydantic_core import ErrorDetails

from ..errors import ScenarioConfigError
from ..types import (
    CHANNEL_KINDS,
    Scenario,
    ScenarioFile,
    SweepPoint,
)
from .config_loaders import ScenarioDocument, load_defaults_config

__all__ = [
    'nest_section',
    'flatten_section',
    'validation_error_key',
    'scenario_from_document',
    'scenario_to_document',
    'format_decimal',
    'sweep_point_row',
]


def nest_section(values: Mapping[str, str]) -> dict[str, Any]:
    '''
    Turn dotted keys (``trigger.efficiency``) into nested dictionaries.

    Args:
        values: Flat key -> value mapping of one section

    Returns:
        Nested mapping suitable for pydantic validation

    Raises:
        ScenarioConfigError: If a key is used both as a value and as a group
    '''
    nested: dict[str, Any] = {}
    for dotted, value in values.items():
        parts = dotted.strip().split('.')
        node = nested
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ScenarioConfigError(f'key {dotted!r} conflicts with {part!r}', key=dotted)
            node = child
        if isinstance(node.get(parts[-1]), dict):
            raise ScenarioConfigError(f'key {dotted!r} conflicts with a group', key=dotted)
        node[parts[-1]] = value.strip()
    return nested


def flatten_section(values: Mapping[str, Any], prefix: str = '') -> dict[str, str]:
    '''
    Inverse of nest_section; leaves become ``repr`` strings for floats.

    None values are omitted so optional keys fall back to their defaults.
    '''
    flat: dict[str, str] = {}
    for key, value in values.items():
        dotted = f'{prefix}{key}'
        if value is None:
            continue
        if isinstance(value, Mapping):
            flat.update(flatten_section(value, prefix=f'{dotted}.'))
        elif isinstance(value, float):
            flat[dotted] = repr(value)
        else:
            flat[dotted] = str(value)
    return flat


def _primary_error(error: ValidationError) -> ErrorDetails:
    # A misspelt key also reports the correct one as missing; name the typo
    errors = error.errors()
    return next((e for e in errors if e['type'] == 'extra_forbidden'), errors[0])


def validation_error_key(error: ValidationError) -> str:
    '''
    Dotted scenario key of the primary error in a pydantic ValidationError.

    Unknown keys take precedence over missing ones. Discriminator tags
    inserted by the channel union (``channel.fiber.x``) are dropped so the
    key matches what the user wrote.
    '''
    first = _primary_error(error)
    loc = [str(part) for part in first['loc']]
    if len(loc) >= 2 and loc[0] == 'channel' and loc[1] in CHANNEL_KINDS:
        del loc[1]
    if first['type'] in ('union_tag_not_found', 'union_tag_invalid'):
        loc.append('kind')
    return '.'.join(loc)


def _describe(error: ValidationError) -> str:
    first = _primary_error(error)
    if first['type'] == 'extra_forbidden':
        return 'unknown key'
    if first['type'] == 'missing':
        return 'missing required key'
    return str(first['msg'])


def scenario_from_document(document: ScenarioDocument) -> Scenario:
    '''
    Validate a raw scenario document and build the Scenario it describes.

    Args:
        document: Raw sectioned document as read from disk

    Returns:
        Validated Scenario with optional keys resolved to their defaults

    Raises:
        ScenarioConfigError: On unknown, missing or invalid keys; ``key``
            holds the dotted name of the offending entry
    '''
    nested = {section: nest_section(values) for section, values in document.items()}
    try:
        parsed = ScenarioFile.model_validate(nested)
    except ValidationError as e:
        key = validation_error_key(e)
        raise ScenarioConfigError(f'{key}: {_describe(e)}', key=key) from e

    run = parsed.run
    overrides: dict[str, Any] = {}
    if run.formula_variant is not None:
        overrides['variant'] = run.formula_variant
    if run.error_correction_factor is not None:
        overrides['error_correction_factor'] = run.error_correction_factor
    if run.mu_lo is not None or run.mu_hi is not None:
        default_lo, default_hi = load_defaults_config()['optimizer']['mu_bounds']
        overrides['mu_bounds'] = (
            run.mu_lo if run.mu_lo is not None else default_lo,
            run.mu_hi if run.mu_hi is not None else default_hi,
        )

    try:
        return Scenario(
            source_kind=parsed.source.kind,
            trigger=parsed.source.trigger,
            launch_efficiency=parsed.source.launch_efficiency,
            channel=parsed.channel,
            receiver=parsed.receiver,
            rep_rate_hz=run.rep_rate_hz,
            **overrides,
        )
    except ValidationError as e:
        # Only the cross-field checks can fail once every section validated
        message = str(e.errors()[0]['msg'])
        key = 'source.trigger' if 'trigger' in message else 'run.mu_lo'
        raise ScenarioConfigError(f'{key}: {message}', key=key) from e


def scenario_to_document(scn: Scenario) -> ScenarioDocument:
    '''
    Serialize a Scenario to its raw sectioned form with every key explicit.

    Reading the result back with scenario_from_document yields an equal
    Scenario.
    '''
    source: dict[str, Any] = {
        'kind': scn.source_kind,
        'launch_efficiency': scn.launch_efficiency,
    }
    if scn.trigger is not None:
        source['trigger'] = scn.trigger.model_dump()

    return {
        'source': flatten_section(source),
        'channel': flatten_section(scn.channel.model_dump()),
        'receiver': flatten_section(scn.receiver.model_dump(by_alias=True)),
        'run': flatten_section(
            {
                'rep_rate_hz': scn.rep_rate_hz,
                'formula_variant': scn.variant,
                'mu_lo': scn.mu_bounds[0],
                'mu_hi': scn.mu_bounds[1],
                'error_correction_factor': scn.error_correction_factor,
            }
        ),
    }


def format_decimal(value: float) -> str:
    '''
    Positional decimal with 9 significant digits, stable across platforms.

    Args:
        value: Number to format

    Returns:
        The number without exponent notation (``0.000123456789``)
    '''
    return np.format_float_positional(
        float(value), precision=9, unique=False, fractional=False, trim='k'
    )


def sweep_point_row(point: SweepPoint) -> list[str]:
    '''
    One CSV row in ``SWEEP_CSV_COLUMNS`` order.
    '''
    return [
        format_decimal(point.d_km),
        format_decimal(point.mu_opt),
        format_decimal(point.p_s),
        format_decimal(point.s_m),
        format_decimal(point.p_exp),
        format_decimal(point.eps),
        format_decimal(point.gain),
        format_decimal(point.bits_per_sec),
        '1' if point.secure else '0',
    ]
