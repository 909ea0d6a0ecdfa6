'''
Tests for the qkd-gain command-line interface.

Commands are driven through ``run`` with capsys capturing stdout (results)
and stderr (messages).
'''

import csv
import io
import logging

import pytest

from qkd_gain.__main__ import main
from qkd_gain.cli import EXIT_CONFIG_ERROR, EXIT_IO_ERROR, EXIT_OK, run
from qkd_gain.optimize import optimize_mu
from qkd_gain.presets_handler import load_scenario
from qkd_gain.types import SWEEP_CSV_COLUMNS

BAD_RECEIVER = '''\
[source]
kind = wcp

[channel]
kind = fiber
alpha_db_per_km = 0.38

[receiver]
efficency = 0.11
dark_per_pulse = 1e-5
baseline_error = 0.015

[run]
rep_rate_hz = 1e8
'''


@pytest.fixture(autouse=True)
def _restore_root_logger():
    '''run() reconfigures the root logger onto the captured stderr.'''
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def _fields(line: str) -> dict[str, str]:
    return dict(part.split('=', 1) for part in line.split())


def _csv(text: str) -> list[list[str]]:
    return list(csv.reader(io.StringIO(text)))


@pytest.mark.integration
class TestCommands:

    def test_presets(self, capsys):
        assert run(['presets']) == EXIT_OK
        names = capsys.readouterr().out.split()
        assert 'fiber-cpspnr' in names
        assert len(names) == 9

    def test_optimize(self, capsys):
        assert run(['--quiet', 'optimize', '--scenario', 'fiber-cpspnr', '--distance', '50']) == EXIT_OK
        fields = _fields(capsys.readouterr().out.strip())
        assert set(fields) == {'mu_opt', 'gain', 'bits_per_sec', 'secure'}
        assert fields['secure'] == '1'
        assert float(fields['gain']) > 0.0

    def test_optimize_insecure_distance(self, capsys):
        assert run(['--quiet', 'optimize', '--scenario', 'fiber-wcp', '--distance', '50']) == EXIT_OK
        fields = _fields(capsys.readouterr().out.strip())
        assert fields['secure'] == '0'
        assert float(fields['gain']) == 0.0

    def test_sweep_to_stdout(self, capsys):
        argv = ['--quiet', 'sweep', '--scenario', 'fiber-cps', '--from', '1', '--to', '100', '--points', '5']
        assert run(argv) == EXIT_OK
        rows = _csv(capsys.readouterr().out)
        assert tuple(rows[0]) == SWEEP_CSV_COLUMNS
        assert len(rows) == 6
        assert float(rows[1][0]) == 1.0
        assert float(rows[-1][0]) == 100.0
        gains = [float(row[6]) for row in rows[1:]]
        assert all(b <= a for a, b in zip(gains, gains[1:]))

    def test_sweep_with_two_points(self, capsys):
        argv = ['--quiet', 'sweep', '--scenario', 'fiber-wcp', '--from', '1', '--to', '10', '--points', '2']
        assert run(argv) == EXIT_OK
        assert len(_csv(capsys.readouterr().out)) == 3

    def test_sweep_is_reproducible(self, capsys):
        argv = ['--quiet', 'sweep', '--scenario', 'satellite-cpspnr', '--from', '200', '--to', '1500', '--points', '4']
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        assert capsys.readouterr().out == first

    def test_sweep_to_file(self, tmp_path, capsys):
        out = tmp_path / 'sweep.csv'
        argv = ['--quiet', 'sweep', '--scenario', 'fiber-cpspnr', '--from', '1', '--to', '50',
                '--points', '3', '--out', str(out)]
        assert run(argv) == EXIT_OK
        assert capsys.readouterr().out == ''
        rows = _csv(out.read_text(encoding='utf-8'))
        assert len(rows) == 4

    def test_fixed_mu_sweep(self, capsys):
        argv = ['--quiet', 'sweep', '--scenario', 'fiber-cps', '--from', '1', '--to', '10',
                '--points', '3', '--fixed-mu', '0.1']
        assert run(argv) == EXIT_OK
        rows = _csv(capsys.readouterr().out)
        assert all(float(row[1]) == 0.1 for row in rows[1:])

    def test_constant_channel_sweep_is_flat(self, data_dir, capsys):
        argv = ['--quiet', 'sweep', '--scenario', str(data_dir / 'constant-wcp.scn'),
                '--from', '1', '--to', '80', '--points', '5']
        assert run(argv) == EXIT_OK
        gains = [float(row[6]) for row in _csv(capsys.readouterr().out)[1:]]
        assert gains[0] > 0.0
        assert all(g == pytest.approx(gains[0], rel=1e-9) for g in gains)

    def test_cutoff(self, capsys):
        assert run(['--quiet', 'cutoff', '--scenario', 'fiber-wcp']) == EXIT_OK
        fields = _fields(capsys.readouterr().out.strip())
        assert 15.0 < float(fields['cutoff_km']) < 22.0

    def test_montecarlo(self, capsys):
        argv = ['--quiet', 'montecarlo', '--scenario', 'freespace-ground-cpspnr', '--distance', '1',
                '--mu', '0.5', '--pulses', '50000', '--seed', '3']
        assert run(argv) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        tally = _fields(lines[0])
        assert tally['n_pulses'] == '50000'
        assert lines[1] == 'quantity,empirical,std_error,analytic,z'
        assert [line.split(',')[0] for line in lines[2:]] == ['p_s', 's_m', 'p_exp', 'eps', 'gain']

    def test_montecarlo_output_is_reproducible(self, capsys):
        argv = ['--quiet', 'montecarlo', '--scenario', 'fiber-cps', '--distance', '10',
                '--mu', '0.1', '--pulses', '20000', '--seed', '5']
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        assert capsys.readouterr().out == first

    def test_calibrate_and_write(self, tmp_path, capsys):
        out = tmp_path / 'calibrated.scn'
        argv = ['--quiet', 'calibrate', '--scenario', 'freespace-ground-cpspnr', '--distance', '1',
                '--target-gain', '4.2e-3', '--write', str(out)]
        assert run(argv) == EXIT_OK
        coupling = float(_fields(capsys.readouterr().out.strip())['ref_coupling'])
        assert coupling == pytest.approx(0.316892, rel=1e-2)
        written = load_scenario(out)
        assert written.channel.ref_coupling == pytest.approx(coupling, rel=1e-8)
        assert optimize_mu(written, 1.0).gain_opt == pytest.approx(4.2e-3, rel=1e-3)

    @pytest.mark.slow
    def test_calibrate_background_and_write(self, tmp_path, capsys):
        out = tmp_path / 'joint.scn'
        argv = ['--quiet', 'calibrate', '--scenario', 'satellite-cpspnr', '--distance', '300',
                '--target-gain', '3.3e-7', '--cutoff-kind', 'wcp', '--cutoff-at', '90', '--write', str(out)]
        assert run(argv) == EXIT_OK
        fields = _fields(capsys.readouterr().out.strip())
        assert set(fields) == {'dark_per_pulse', 'ref_coupling'}
        written = load_scenario(out)
        assert written.receiver.dark_prob_per_pulse == pytest.approx(float(fields['dark_per_pulse']), rel=1e-8)
        assert optimize_mu(written, 300.0).gain_opt == pytest.approx(3.3e-7, rel=1e-3)
        assert optimize_mu(written.with_kind('wcp'), 95.0).gain_opt == 0.0

    def test_summary(self, capsys):
        argv = ['--quiet', 'summary', '--scenario', 'fiber-cpspnr', '--distance', '50', '--exposure', '10']
        assert run(argv) == EXIT_OK
        lines = [_fields(line) for line in capsys.readouterr().out.splitlines()]
        assert [line['kind'] for line in lines] == ['wcp', 'cps', 'cps_pnr']
        assert lines[0]['secure'] == '0'
        assert float(lines[2]['gain']) > float(lines[1]['gain'])
        assert float(lines[2]['secret_bits']) == pytest.approx(float(lines[2]['bits_per_sec']) * 10, rel=1e-6)

    def test_variant_override(self, capsys):
        argv = ['--quiet', 'optimize', '--scenario', 'fiber-cps', '--distance', '20', '--variant', 'as-printed']
        assert run(argv) == EXIT_OK
        printed = float(_fields(capsys.readouterr().out.strip())['gain'])
        run(['--quiet', 'optimize', '--scenario', 'fiber-cps', '--distance', '20'])
        strict = float(_fields(capsys.readouterr().out.strip())['gain'])
        assert printed >= strict

    def test_logs_go_to_stderr(self, capsys):
        assert run(['--log-level', 'INFO', 'cutoff', '--scenario', 'fiber-wcp']) == EXIT_OK
        captured = capsys.readouterr()
        assert len(captured.out.splitlines()) == 1
        assert 'cutoff for wcp' in captured.err

    def test_module_entry_point(self, capsys):
        assert main(['presets']) == EXIT_OK


@pytest.mark.integration
class TestExitCodes:

    def test_missing_scenario_file(self, tmp_path, capsys):
        argv = ['--quiet', 'optimize', '--scenario', str(tmp_path / 'missing.scn'), '--distance', '10']
        assert run(argv) == EXIT_IO_ERROR
        assert 'missing.scn' in capsys.readouterr().err

    def test_missing_scenario_without_suffix(self, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        argv = ['--quiet', 'optimize', '--scenario', 'myscn', '--distance', '10']
        assert run(argv) == EXIT_IO_ERROR
        assert 'myscn' in capsys.readouterr().err

    def test_unknown_preset(self, capsys):
        assert run(['--quiet', 'optimize', '--scenario', 'lunar-wcp', '--distance', '10']) == EXIT_CONFIG_ERROR

    def test_misspelt_key_is_reported(self, tmp_path, capsys):
        path = tmp_path / 'bad.scn'
        path.write_text(BAD_RECEIVER, encoding='utf-8')
        assert run(['--quiet', 'optimize', '--scenario', str(path), '--distance', '10']) == EXIT_CONFIG_ERROR
        assert 'receiver.efficency' in capsys.readouterr().err

    @pytest.mark.parametrize('distance', ['0', '-3'])
    def test_non_positive_distance(self, distance, capsys):
        argv = ['--quiet', 'optimize', '--scenario', 'fiber-wcp', '--distance', distance]
        assert run(argv) == EXIT_CONFIG_ERROR
        assert 'd must be' in capsys.readouterr().err

    def test_sweep_needs_two_points(self, capsys):
        argv = ['--quiet', 'sweep', '--scenario', 'fiber-wcp', '--from', '1', '--to', '10', '--points', '1']
        assert run(argv) == EXIT_CONFIG_ERROR
        assert 'n_points' in capsys.readouterr().err

    def test_sweep_needs_positive_range(self, capsys):
        argv = ['--quiet', 'sweep', '--scenario', 'fiber-wcp', '--from', '0', '--to', '10']
        assert run(argv) == EXIT_CONFIG_ERROR

    def test_montecarlo_needs_pulses(self, capsys):
        argv = ['--quiet', 'montecarlo', '--scenario', 'fiber-wcp', '--distance', '5', '--mu', '0.1',
                '--pulses', '0']
        assert run(argv) == EXIT_CONFIG_ERROR
        assert 'n_pulses' in capsys.readouterr().err

    def test_cutoff_bracket_error(self, capsys):
        argv = ['--quiet', 'cutoff', '--scenario', 'fiber-wcp', '--from', '1', '--to', '5']
        assert run(argv) == EXIT_CONFIG_ERROR

    def test_unwritable_output(self, tmp_path, capsys):
        argv = ['--quiet', 'sweep', '--scenario', 'fiber-wcp', '--from', '1', '--to', '10',
                '--points', '2', '--out', str(tmp_path / 'no' / 'such' / 'dir.csv')]
        assert run(argv) == EXIT_IO_ERROR

    def test_bad_variant_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            run(['optimize', '--scenario', 'fiber-wcp', '--distance', '10', '--variant', 'bogus'])
        assert exc_info.value.code == EXIT_CONFIG_ERROR

    def test_cutoff_options_go_together(self, capsys):
        argv = ['--quiet', 'calibrate', '--scenario', 'satellite-cpspnr', '--distance', '300',
                '--target-gain', '3.3e-7', '--cutoff-kind', 'wcp']
        assert run(argv) == EXIT_CONFIG_ERROR
        assert '--cutoff-at' in capsys.readouterr().err

    def test_fiber_background_cannot_be_calibrated(self, capsys):
        argv = ['--quiet', 'calibrate', '--scenario', 'fiber-cpspnr', '--distance', '1',
                '--target-gain', '1e-3', '--cutoff-kind', 'wcp', '--cutoff-at', '10']
        assert run(argv) == EXIT_CONFIG_ERROR
        assert 'freespace or satellite' in capsys.readouterr().err
