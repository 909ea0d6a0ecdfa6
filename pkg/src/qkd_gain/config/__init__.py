'''
Configuration package for qkd_gain.

This package contains the configuration files shipped with the library:
- defaults.json: library-wide numerical defaults and logging settings
- presets/*.scn: scenario files for the fiber, free-space and satellite links

This package is internal to qkd_gain and should not be imported directly by users.
'''

from pathlib import Path

# Configuration file paths
_CONFIG_DIR = Path(__file__).parent
DEFAULTS_FILE_PATH = _CONFIG_DIR / 'defaults.json'
PRESETS_DIR_PATH = _CONFIG_DIR / 'presets'
PRESET_SUFFIX = '.scn'

__all__ = [
    'DEFAULTS_FILE_PATH',
    'PRESETS_DIR_PATH',
    'PRESET_SUFFIX',
]
