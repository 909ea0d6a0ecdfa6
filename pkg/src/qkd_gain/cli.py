"""Command-line interface: ``qkd-gain <subcommand> --scenario PATH|PRESET ...``.

Results go to stdout (or the ``--out`` file) as machine-parsable lines and
CSV; logs, colour and progress bars go to stderr.

Exit codes:
    0: success
    1: scenario file missing or unreadable, or output not writable
    2: configuration or parameter error (the message names the key or flag)
"""

import argparse
import csv
import io
import logging
import sys
from typing import Callable, Sequence

import numpy as np
from colorama import Fore, Style, just_fix_windows_console

from . import __version__
from ._utils import format_decimal, load_defaults_config, sweep_point_row
from .errors import InvalidParameterError, QKDGainError, ScenarioConfigError
from .gain import is_secure
from .montecarlo import compare_with_analytic, simulate
from .optimize import (
    calibrate_background,
    calibrate_ref_coupling,
    compare_sources,
    find_cutoff,
    link_budget,
    optimize_mu,
    secret_bits_per_pass,
    sweep_distance,
    sweep_fixed_mu,
)
from .presets_handler import PresetsHandler, resolve_scenario, save_scenario
from .types import FORMULA_VARIANTS, SOURCE_KINDS, SWEEP_CSV_COLUMNS, FormulaVariant, Scenario

__all__ = [
    'EXIT_OK',
    'EXIT_IO_ERROR',
    'EXIT_CONFIG_ERROR',
    'build_parser',
    'run',
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO_ERROR = 1
EXIT_CONFIG_ERROR = 2

_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


class _Console:
    """Coloured status messages on stderr; plain when quiet."""

    def __init__(self, quiet: bool) -> None:
        self.quiet = quiet
        if not quiet:
            just_fix_windows_console()

    def _emit(self, colour: str, text: str) -> None:
        if self.quiet:
            return
        print(f'{colour}{text}{Style.RESET_ALL}', file=sys.stderr)

    def success(self, text: str) -> None:
        self._emit(Fore.GREEN, text)

    def warning(self, text: str) -> None:
        self._emit(Fore.YELLOW, text)

    def error(self, text: str) -> None:
        # Errors are shown even in quiet mode
        if self.quiet:
            print(f'error: {text}', file=sys.stderr)
        else:
            self._emit(Fore.RED, f'error: {text}')


def _variant_flag(value: str) -> FormulaVariant:
    canonical = value.strip().lower().replace('-', '_')
    if canonical not in FORMULA_VARIANTS:
        raise argparse.ArgumentTypeError(
            f'expected one of {", ".join(v.replace("_", "-") for v in FORMULA_VARIANTS)}'
        )
    return canonical  # type: ignore[return-value]


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    defaults = load_defaults_config()
    parser = argparse.ArgumentParser(
        prog='qkd-gain',
        description='Secure key rate of BB84 with WCP, CPS and CPS/PNR sources.',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument(
        '--log-level',
        choices=_LOG_LEVELS,
        default=defaults['logging']['level'],
        help='Logging threshold for stderr messages.',
    )
    parser.add_argument(
        '--quiet', action='store_true', help='No progress bars or coloured status lines.'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    def scenario_command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument(
            '--scenario', required=True, help='Scenario file path or shipped preset name.'
        )
        p.add_argument(
            '--variant',
            type=_variant_flag,
            default=None,
            help='Gain formula variant {as-printed,single-photon-fraction}; overrides the file.',
        )
        return p

    p = scenario_command('optimize', 'Optimize mu at one distance.')
    p.add_argument('--distance', type=float, required=True, metavar='KM')

    p = scenario_command('sweep', 'Optimized gain over log-spaced distances, as CSV.')
    p.add_argument('--from', dest='d_lo', type=float, required=True, metavar='KM')
    p.add_argument('--to', dest='d_hi', type=float, required=True, metavar='KM')
    p.add_argument('--points', type=int, default=40, metavar='N')
    p.add_argument('--out', default=None, metavar='PATH', help='CSV destination (stdout if omitted).')
    p.add_argument('--fixed-mu', type=float, default=None, metavar='X', help='Hold mu fixed instead of optimizing.')
    p.add_argument('--workers', type=int, default=1, metavar='N')

    p = scenario_command('cutoff', 'Largest distance whose optimized gain reaches a threshold.')
    p.add_argument('--gain-min', type=float, default=0.0)
    p.add_argument('--from', dest='d_lo', type=float, default=0.1, metavar='KM')
    p.add_argument('--to', dest='d_hi', type=float, default=1000.0, metavar='KM')

    p = scenario_command('montecarlo', 'Pulse-level simulation compared with the analytic model.')
    p.add_argument('--distance', type=float, required=True, metavar='KM')
    p.add_argument('--mu', type=float, default=None, help='Pump parameter (optimized if omitted).')
    p.add_argument('--pulses', type=int, default=defaults['montecarlo']['default_pulses'], metavar='N')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--workers', type=int, default=1, metavar='N')

    p = scenario_command('calibrate', 'Fit the free-space reference coupling to a target gain.')
    p.add_argument('--distance', type=float, required=True, metavar='KM')
    p.add_argument('--target-gain', type=float, required=True)
    p.add_argument(
        '--cutoff-kind',
        choices=SOURCE_KINDS,
        default=None,
        help='Also fit the background so this source kind stops being secure at --cutoff-at.',
    )
    p.add_argument('--cutoff-at', type=float, default=None, metavar='KM')
    p.add_argument('--write', default=None, metavar='PATH', help='Save the calibrated scenario.')

    p = scenario_command('summary', 'Compare the three source kinds at one distance.')
    p.add_argument('--distance', type=float, required=True, metavar='KM')
    p.add_argument('--exposure', type=float, default=None, metavar='S', help='Also report secret bits per exposure.')

    sub.add_parser('presets', help='List the shipped scenario presets.')
    return parser


def _load(args: argparse.Namespace) -> Scenario:
    scn = resolve_scenario(args.scenario)
    if args.variant is not None:
        scn = scn.with_variant(args.variant)
    return scn


def _result_line(**fields: float | int | str) -> str:
    parts = []
    for key, value in fields.items():
        text = format_decimal(value) if isinstance(value, float) else str(value)
        parts.append(f'{key}={text}')
    return ' '.join(parts)


def cmd_optimize(args: argparse.Namespace, console: _Console) -> int:
    scn = _load(args)
    optimum = optimize_mu(scn, args.distance)
    print(
        _result_line(
            mu_opt=optimum.mu_opt,
            gain=optimum.gain_opt,
            bits_per_sec=optimum.gain_opt * scn.rep_rate_hz,
            secure=int(optimum.secure),
        )
    )
    if not optimum.secure:
        console.warning(f'no secure key at {args.distance} km')
    return EXIT_OK


def _sweep_csv(rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(SWEEP_CSV_COLUMNS)
    writer.writerows(rows)
    return buffer.getvalue()


def cmd_sweep(args: argparse.Namespace, console: _Console) -> int:
    if args.points < 2:
        raise InvalidParameterError(f'n_points must be at least 2, got {args.points}')
    if args.d_lo <= 0.0 or args.d_hi <= args.d_lo:
        raise InvalidParameterError(
            f'--from/--to must satisfy 0 < from < to, got {args.d_lo}, {args.d_hi}'
        )
    scn = _load(args)
    distances = np.geomspace(args.d_lo, args.d_hi, args.points)
    # Exact endpoints regardless of rounding in geomspace
    distances[0], distances[-1] = args.d_lo, args.d_hi

    progress = not args.quiet and sys.stderr.isatty()
    if args.fixed_mu is None:
        points = sweep_distance(scn, distances, workers=args.workers, progress=progress)
    else:
        points = sweep_fixed_mu(scn, distances, args.fixed_mu, workers=args.workers, progress=progress)
    text = _sweep_csv([sweep_point_row(p) for p in points])

    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        console.success(f'wrote {len(points)} rows to {args.out}')
    return EXIT_OK


def cmd_cutoff(args: argparse.Namespace, console: _Console) -> int:
    scn = _load(args)
    cutoff = find_cutoff(scn, args.gain_min, args.d_lo, args.d_hi)
    print(_result_line(cutoff_km=cutoff))
    return EXIT_OK


def cmd_montecarlo(args: argparse.Namespace, console: _Console) -> int:
    scn = _load(args)
    mu = args.mu if args.mu is not None else optimize_mu(scn, args.distance).mu_opt
    progress = not args.quiet and sys.stderr.isatty()
    tally = simulate(
        scn, args.distance, mu, args.pulses, args.seed, workers=args.workers, progress=progress
    )
    print(
        _result_line(
            n_pulses=tally.n_pulses,
            n_triggered=tally.n_triggered,
            n_multi=tally.n_multi_given_trigger,
            n_detected=tally.n_detected_given_trigger,
            n_errors=tally.n_errors_given_detected,
            mu=float(mu),
        )
    )
    print('quantity,empirical,std_error,analytic,z')
    worst = 0.0
    for row in compare_with_analytic(tally, scn, args.distance, mu):
        print(
            ','.join(
                [
                    row.quantity,
                    format_decimal(row.empirical),
                    format_decimal(row.std_error),
                    format_decimal(row.analytic),
                    format_decimal(row.z) if np.isfinite(row.z) else 'inf',
                ]
            )
        )
        worst = max(worst, abs(row.z))
    if worst > 3.0:
        console.warning(f'largest |z| is {worst:.2f}')
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace, console: _Console) -> int:
    scn = _load(args)
    if (args.cutoff_kind is None) != (args.cutoff_at is None):
        raise InvalidParameterError('--cutoff-kind and --cutoff-at must be given together')
    if args.cutoff_kind is None:
        coupling = calibrate_ref_coupling(scn, args.distance, args.target_gain)
        print(_result_line(ref_coupling=coupling))
        calibrated = scn.model_copy(
            update={'channel': scn.channel.model_copy(update={'ref_coupling': coupling})}
        )
        header = (
            f'ref_coupling fitted so the optimized gain at {args.distance} km '
            f'is {args.target_gain}'
        )
    else:
        dark, coupling = calibrate_background(
            scn, args.distance, args.target_gain, args.cutoff_kind, args.cutoff_at
        )
        print(_result_line(dark_per_pulse=dark, ref_coupling=coupling))
        calibrated = scn.model_copy(
            update={
                'channel': scn.channel.model_copy(update={'ref_coupling': coupling}),
                'receiver': scn.receiver.model_copy(update={'dark_prob_per_pulse': dark}),
            }
        )
        header = (
            f'ref_coupling and dark_per_pulse fitted so the optimized gain at {args.distance} km '
            f'is {args.target_gain} and {args.cutoff_kind} is secure up to {args.cutoff_at} km'
        )
    if args.write is not None:
        save_scenario(calibrated, args.write, header=header)
        console.success(f'wrote calibrated scenario to {args.write}')
    return EXIT_OK


def cmd_summary(args: argparse.Namespace, console: _Console) -> int:
    scn = _load(args)
    kinds = ('wcp',) if scn.trigger is None else ('wcp', 'cps', 'cps_pnr')
    for kind, point in compare_sources(scn, args.distance, kinds).items():
        fields: dict[str, float | int | str] = dict(
            kind=kind,
            mu_opt=point.mu_opt,
            gain=point.gain,
            bits_per_sec=point.bits_per_sec,
            secure=int(is_secure(point.gain)),
        )
        if args.exposure is not None:
            fields['secret_bits'] = secret_bits_per_pass(
                scn.with_kind(kind), args.distance, args.exposure
            )
        print(_result_line(**fields))
    return EXIT_OK


def cmd_presets(args: argparse.Namespace, console: _Console) -> int:
    for name in PresetsHandler.available_presets():
        print(name)
    return EXIT_OK


_COMMANDS: dict[str, Callable[[argparse.Namespace, _Console], int]] = {
    'optimize': cmd_optimize,
    'sweep': cmd_sweep,
    'cutoff': cmd_cutoff,
    'montecarlo': cmd_montecarlo,
    'calibrate': cmd_calibrate,
    'summary': cmd_summary,
    'presets': cmd_presets,
}


def _configure_logging(level: str) -> None:
    settings = load_defaults_config()['logging']
    logging.basicConfig(level=level, format=settings['format'], stream=sys.stderr, force=True)


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.log_level)
    console = _Console(quiet=args.quiet)

    try:
        return _COMMANDS[args.command](args, console)
    except ScenarioConfigError as e:
        console.error(str(e))
        return EXIT_CONFIG_ERROR
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        console.error(f'{e.strerror}: {e.filename}')
        return EXIT_IO_ERROR
    except OSError as e:
        console.error(str(e))
        return EXIT_IO_ERROR
    except QKDGainError as e:
        console.error(str(e))
        return EXIT_CONFIG_ERROR
