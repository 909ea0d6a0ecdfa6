"""
Entry point for running qkd_gain as a module: python -m qkd_gain
"""

import sys
from typing import Optional, Sequence


def main(argv: Optional[Sequence[str]] = None) -> Optional[int]:
    """Main entry point for the qkd-gain CLI."""
    # Import here so `python -m qkd_gain --help` fails cleanly on a broken install
    from qkd_gain.cli import run

    try:
        return run(argv)
    except KeyboardInterrupt:
        print('\ninterrupted', file=sys.stderr)
        return 130


if __name__ == '__main__':
    sys.exit(main() or 0)
