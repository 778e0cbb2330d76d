import json
import math

import numpy as np
import pytest

import trialorder.oracle as oracle_mod
from helpers import make_set, rel_ok
from trialorder import (
    Ordering,
    VerificationConfig,
    brute_force_best_order,
    expected_time,
    simulate,
    solomonoff_order,
    verify_bounds_random,
)

THREE = make_set([0.5, 0.4, 0.3])


class TestBruteForce:
    def test_single_candidate(self):
        cs = make_set([0.5], [2.0])
        res = brute_force_best_order(cs)
        assert res.best_order.perm == (0,)
        assert res.best_expected_time == 2.0
        assert res.evaluated == 1

    def test_three_candidates(self):
        res = brute_force_best_order(THREE)
        assert res.best_order.perm == (0, 1, 2)
        assert res.best_expected_time == pytest.approx(1.8, rel=1e-12)
        assert res.evaluated == 6

    def test_prefers_cheap_candidate(self):
        cs = make_set([0.5, 0.5], [2.0, 1.0])
        res = brute_force_best_order(cs)
        assert res.best_order.perm == (1, 0)

    def test_factorial_guard(self):
        cs = make_set([0.5] * 11)
        with pytest.raises(ValueError, match="guard"):
            brute_force_best_order(cs)

    def test_tie_break_is_lexicographically_smallest(self):
        cs = make_set([0.5, 0.5, 0.5], [2.0, 2.0, 2.0])
        assert brute_force_best_order(cs).best_order.perm == (0, 1, 2)

    def test_agrees_with_rule(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            n = int(rng.integers(1, 7))
            cs = make_set(rng.uniform(0.05, 0.95, n), rng.uniform(0.1, 10.0, n))
            bf = brute_force_best_order(cs)
            rule = expected_time(cs, solomonoff_order(cs))
            assert rel_ok(rule, bf.best_expected_time, 1e-9)

    def test_chunked_path_matches_table_path(self, monkeypatch):
        cs = make_set([0.7, 0.2, 0.5, 0.9, 0.1], [1.0, 0.5, 2.0, 4.0, 0.2])
        direct = brute_force_best_order(cs)
        monkeypatch.setattr(oracle_mod, "_PERM_TABLE_MAX_N", 0)
        monkeypatch.setattr(oracle_mod, "_PERM_CHUNK", 7)
        chunked = brute_force_best_order(cs)
        assert chunked == direct


class TestSimulate:
    def test_certain_single_candidate(self):
        cs = make_set([1.0], [2.0])
        res = simulate(cs, Ordering.identity(1), trials=500, seed=1)
        assert res.mean_time == 2.0
        assert res.std_error == 0.0
        assert res.success_rate == 1.0

    def test_hopeless_candidates_always_exhaust(self):
        cs = make_set([0.0, 0.0], [1.5, 2.5])
        res = simulate(cs, Ordering.identity(2), trials=300, seed=2)
        assert res.mean_time == 4.0  # exact: every candidate has one sample
        assert res.success_rate == 0.0

    def test_requires_at_least_one_trial(self):
        with pytest.raises(ValueError, match="trials"):
            simulate(THREE, Ordering.identity(3), trials=0, seed=0)

    def test_bit_reproducible_across_chunk_boundaries(self):
        trials = 70_000  # spans two internal chunks
        a = simulate(THREE, Ordering.identity(3), trials=trials, seed=99)
        b = simulate(THREE, Ordering.identity(3), trials=trials, seed=99)
        assert a == b

    def test_seed_changes_the_estimate(self):
        a = simulate(THREE, Ordering.identity(3), trials=2000, seed=1)
        b = simulate(THREE, Ordering.identity(3), trials=2000, seed=2)
        assert a.mean_time != b.mean_time

    def test_converges_to_analytic_values(self):
        trials = 200_000
        res = simulate(THREE, Ordering.identity(3), trials=trials, seed=7)
        assert abs(res.mean_time - 1.8) <= 4 * res.std_error
        analytic_rate = 1 - 0.5 * 0.6 * 0.7
        binom_se = math.sqrt(analytic_rate * (1 - analytic_rate) / trials)
        assert abs(res.success_rate - analytic_rate) <= 4 * binom_se

    def test_multi_sample_times_draw_uniformly(self):
        # mean of samples (1, 3) is 2; certain success on first try
        cs = make_set([1.0], [[1.0, 3.0]])
        res = simulate(cs, Ordering.identity(1), trials=100_000, seed=11)
        assert abs(res.mean_time - 2.0) <= 4 * res.std_error

    def test_records_generator_provenance(self):
        res = simulate(THREE, Ordering.identity(3), trials=10, seed=0)
        assert res.generator == "philox"
        assert res.seed == 0


class TestVerifyBoundsRandom:
    def test_zero_instances_empty_report(self):
        rep = verify_bounds_random(VerificationConfig(instances=0, seed=1))
        assert rep.total_failures == 0
        assert rep.checks == ()
        assert rep.passed

    def test_default_run_is_clean(self):
        rep = verify_bounds_random(VerificationConfig(instances=400, seed=13))
        assert rep.passed, rep.to_dict()
        names = {c.name for c in rep.checks}
        assert {
            "decomposition-identity",
            "adjacent-exact",
            "adjacent-reduction",
            "sandwich-adjacent",
            "sandwich-upper-general",
            "sandwich-lower-general",
            "sandwich-upper-equal-t",
            "sandwich-lower-equal-t",
            "equal-p-corrected",
            "optimality",
        } == names
        for c in rep.checks:
            if "sandwich" not in c.name:
                assert c.max_residual < 1e-10, c

    def test_equal_p_pinned_mode_exposes_misprint(self):
        rep = verify_bounds_random(VerificationConfig(instances=200, seed=3, equal_p_only=True))
        stats = rep.stats("equal-p-paper-variant")
        assert stats.runs == 200  # continuous times: swapped pair always differs
        assert stats.failures == stats.runs
        assert rep.stats("equal-p-corrected").failures == 0

    def test_report_serializes(self):
        rep = verify_bounds_random(VerificationConfig(instances=5, seed=1))
        payload = json.loads(json.dumps(rep.to_dict()))
        assert payload["instances"] == 5
        assert payload["passed"] is True

    def test_reproducible_for_fixed_seed(self):
        a = verify_bounds_random(VerificationConfig(instances=50, seed=21))
        b = verify_bounds_random(VerificationConfig(instances=50, seed=21))
        assert a == b

    def test_config_validates_ranges(self):
        with pytest.raises(ValueError, match="instances"):
            VerificationConfig(instances=-1, seed=0)
        with pytest.raises(ValueError, match="p_range"):
            VerificationConfig(instances=1, seed=0, p_range=(0.0, 0.5))
        with pytest.raises(ValueError, match="t_range"):
            VerificationConfig(instances=1, seed=0, t_range=(1.0, 0.5))
