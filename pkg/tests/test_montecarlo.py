'''
Tests for the pulse-by-pulse Monte Carlo simulator and its comparison
against the analytic pipeline.
'''

import math

import pytest
from pydantic import ValidationError

from qkd_gain.errors import InvalidParameterError
from qkd_gain.montecarlo import block_generator, compare_with_analytic, simulate, simulate_block
from qkd_gain.optimize import gain_at, optimize_mu
from qkd_gain.presets_handler import PresetsHandler
from qkd_gain.types import FreeSpaceChannel, TrialTally

BLOCK = 1 << 20


def _short_link(make_scenario, kind):
    '''Free-space link with transmittance 0.25 at 2 km.'''
    return make_scenario(kind, channel=FreeSpaceChannel(ref_coupling=1.0, ref_distance_km=1.0))


@pytest.mark.unit
class TestTrialTally:

    def test_rates(self):
        tally = TrialTally(
            n_pulses=100,
            n_triggered=50,
            n_multi_given_trigger=5,
            n_detected_given_trigger=20,
            n_errors_given_detected=2,
        )
        assert (tally.p_s, tally.s_m, tally.p_exp, tally.eps) == (0.5, 0.1, 0.4, 0.1)

    def test_empty_tally_has_zero_rates(self):
        tally = TrialTally()
        assert (tally.p_s, tally.s_m, tally.p_exp, tally.eps) == (0.0, 0.0, 0.0, 0.0)
        assert tally.gain() == (0.0, 0.0)

    def test_merge_adds_counts(self):
        a = TrialTally(n_pulses=10, n_triggered=4, n_detected_given_trigger=2)
        b = TrialTally(n_pulses=5, n_triggered=1, n_detected_given_trigger=1, n_errors_given_detected=1)
        merged = a + b
        assert merged == a.merge(b)
        assert merged.n_pulses == 15
        assert merged.n_triggered == 5
        assert merged.n_errors_given_detected == 1

    def test_nesting_is_enforced(self):
        with pytest.raises(ValidationError):
            TrialTally(n_pulses=1, n_triggered=2)
        with pytest.raises(ValidationError):
            TrialTally(n_pulses=10, n_triggered=5, n_detected_given_trigger=1, n_errors_given_detected=2)

    def test_stderrs_are_binomial(self):
        tally = TrialTally(n_pulses=400, n_triggered=100)
        assert tally.stderrs()['p_s'] == pytest.approx(math.sqrt(0.25 * 0.75 / 400))


@pytest.mark.unit
class TestSimulate:

    def test_same_seed_same_tally(self, make_scenario):
        scn = _short_link(make_scenario, 'cps_pnr')
        assert simulate(scn, 2.0, 0.3, 200_000, seed=7) == simulate(scn, 2.0, 0.3, 200_000, seed=7)

    def test_different_seeds_differ(self, make_scenario):
        scn = _short_link(make_scenario, 'cps')
        assert simulate(scn, 2.0, 0.3, 200_000, seed=1) != simulate(scn, 2.0, 0.3, 200_000, seed=2)

    def test_worker_count_does_not_change_the_tally(self, make_scenario):
        scn = _short_link(make_scenario, 'cps_pnr')
        n_pulses = 2 * BLOCK + 12_345
        serial = simulate(scn, 2.0, 0.3, n_pulses, seed=11, workers=1)
        assert simulate(scn, 2.0, 0.3, n_pulses, seed=11, workers=3) == serial

    def test_tally_is_the_sum_of_its_blocks(self, make_scenario):
        scn = _short_link(make_scenario, 'wcp')
        n_pulses = BLOCK + 1000
        expected = simulate_block(scn, 2.0, 0.2, BLOCK, block_generator(5, 0)) + simulate_block(
            scn, 2.0, 0.2, 1000, block_generator(5, 1)
        )
        assert simulate(scn, 2.0, 0.2, n_pulses, seed=5) == expected
        assert expected.n_pulses == n_pulses

    def test_weak_coherent_source_always_triggers(self, make_scenario):
        tally = simulate(_short_link(make_scenario, 'wcp'), 2.0, 0.2, 10_000, seed=0)
        assert tally.n_triggered == tally.n_pulses == 10_000

    def test_zero_pump_never_triggers_ideal_detector(self, make_scenario, ideal_trigger):
        scn = make_scenario('cps_pnr', trigger=ideal_trigger)
        tally = simulate(scn, 10.0, 0.0, 50_000, seed=0)
        assert tally.n_triggered == 0
        rows = compare_with_analytic(tally, scn, 10.0, 0.0)
        assert all(row.z == 0.0 for row in rows)

    def test_ideal_pnr_trigger_never_launches_multi_photon_pulses(self, make_scenario, ideal_trigger):
        scn = _short_link(make_scenario, 'cps_pnr').model_copy(update={'trigger': ideal_trigger})
        tally = simulate(scn, 2.0, 0.5, 200_000, seed=4)
        assert tally.n_triggered > 0
        assert tally.n_multi_given_trigger == 0

    def test_standard_error_shrinks_with_more_pulses(self, make_scenario):
        scn = _short_link(make_scenario, 'cps')
        small = simulate(scn, 2.0, 0.3, 200_000, seed=9).stderrs()
        large = simulate(scn, 2.0, 0.3, 400_000, seed=9).stderrs()
        for name in ('p_s', 'p_exp'):
            assert large[name] / small[name] == pytest.approx(1 / math.sqrt(2), rel=0.2)

    @pytest.mark.parametrize(
        'kwargs',
        [
            dict(n_pulses=0, seed=0),
            dict(n_pulses=100, seed=-1),
        ],
    )
    def test_invalid_run_parameters_raise(self, make_scenario, kwargs):
        with pytest.raises(InvalidParameterError):
            simulate(make_scenario(), 10.0, 0.1, **kwargs)

    def test_invalid_distance_raises(self, make_scenario):
        with pytest.raises(InvalidParameterError, match='d must be'):
            simulate(make_scenario(), 0.0, 0.1, 100, seed=0)


@pytest.mark.unit
class TestCompareWithAnalytic:

    def test_row_order(self, make_scenario):
        scn = _short_link(make_scenario, 'cps')
        tally = simulate(scn, 2.0, 0.3, 100_000, seed=3)
        rows = compare_with_analytic(tally, scn, 2.0, 0.3)
        assert [row.quantity for row in rows] == ['p_s', 's_m', 'p_exp', 'eps', 'gain']
        assert rows[0].empirical == tally.p_s

    def test_certain_trigger_compares_exactly(self, make_scenario):
        scn = _short_link(make_scenario, 'wcp')
        tally = simulate(scn, 2.0, 0.2, 10_000, seed=0)
        p_s_row = compare_with_analytic(tally, scn, 2.0, 0.2)[0]
        assert p_s_row.empirical == p_s_row.analytic == 1.0
        assert p_s_row.z == 0.0

    @pytest.mark.parametrize('kind', ['wcp', 'cps', 'cps_pnr'])
    def test_rates_agree_with_analytic(self, make_scenario, kind):
        scn = _short_link(make_scenario, kind)
        tally = simulate(scn, 2.0, 0.3, 1_000_000, seed=2024)
        for row in compare_with_analytic(tally, scn, 2.0, 0.3):
            assert abs(row.z) < 4.0, row

    @pytest.mark.parametrize('kind', ['wcp', 'cps', 'cps_pnr'])
    def test_gain_agrees_at_the_optimum(self, make_scenario, kind):
        scn = _short_link(make_scenario, kind)
        mu = optimize_mu(scn, 2.0).mu_opt
        tally = simulate(scn, 2.0, mu, 1_000_000, seed=99)
        gain_row = compare_with_analytic(tally, scn, 2.0, mu)[-1]
        assert gain_row.analytic > 0.0
        assert abs(gain_row.z) < 4.0, gain_row


@pytest.mark.slow
class TestOracleAgreement:
    '''Ten million pulses per scenario, compared within three standard errors.'''

    @pytest.mark.parametrize(
        'preset,d',
        [
            ('fiber-wcp', 10.0),
            ('freespace-ground-wcp', 1.0),
            ('satellite-wcp', 50.0),
            ('fiber-cps', 10.0),
            ('freespace-ground-cps', 1.0),
            ('satellite-cps', 100.0),
            ('fiber-cpspnr', 10.0),
            ('freespace-ground-cpspnr', 1.0),
            ('satellite-cpspnr', 100.0),
        ],
    )
    def test_presets_agree_within_three_sigma(self, preset, d):
        scn = PresetsHandler.load_preset(preset)
        mu = optimize_mu(scn, d).mu_opt
        tally = simulate(scn, d, mu, 10_000_000, seed=1, workers=4)
        rows = compare_with_analytic(tally, scn, d, mu)
        for row in rows:
            assert abs(row.z) <= 3.0, row
        gain_row = rows[-1]
        assert gain_row.analytic > 0.0
        assert abs(gain_row.empirical - gain_at(scn, d, mu)) <= 3.0 * gain_row.std_error
