import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import candidate_sets, make_set, sets_with_ordering
from trialorder import (
    Candidate,
    CandidateSet,
    Ordering,
    mean_time,
    prefix_aggregates,
    prefix_log_products,
    ratio,
    validate,
)


class TestCandidate:
    def test_mean_time_single_sample(self):
        assert mean_time(Candidate("a", 0.5, (2.0,))) == 2.0

    def test_mean_time_is_arithmetic_mean(self):
        assert mean_time(Candidate("a", 0.5, (1, 2, 3))) == 2.0
        assert mean_time(Candidate("a", 0.5, (1.0, 2.0))) == 1.5

    def test_ratio(self):
        assert ratio(Candidate("a", 0.5, (1.0,))) == 0.5
        assert ratio(Candidate("a", 0.5, (2.0,))) == 0.25
        assert ratio(Candidate("a", 0.9, (3.0,))) == pytest.approx(0.3, rel=1e-15)

    def test_construction_rejects_bad_probability(self):
        with pytest.raises(ValueError, match=r"out of \[0, 1\]"):
            Candidate("a", 1.5, (1.0,))
        with pytest.raises(ValueError, match=r"out of \[0, 1\]"):
            Candidate("a", -0.1, (1.0,))

    def test_construction_rejects_bad_times(self):
        with pytest.raises(ValueError, match="non-positive"):
            Candidate("a", 0.5, (0.0,))
        with pytest.raises(ValueError, match="no execution time samples"):
            Candidate("a", 0.5, ())
        with pytest.raises(ValueError, match="non-finite"):
            Candidate("a", 0.5, (math.inf,))

    def test_probability_endpoints_admitted(self):
        Candidate("a", 0.0, (1.0,))
        Candidate("a", 1.0, (1.0,))


class TestCandidateSet:
    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="empty"):
            CandidateSet(())

    def test_rejects_duplicate_ids(self):
        with pytest.raises(ValueError, match="duplicate"):
            make_set([0.5, 0.4], ids=["x", "x"])

    def test_from_records(self):
        cs = CandidateSet.from_records([
            {"id": "a", "p": 0.5, "times": [1.0, 2.0]},
            ("b", 0.4, [3.0]),
        ])
        assert cs.N == 2
        assert cs.ids == ("a", "b")

    def test_from_records_reports_all_problems(self):
        with pytest.raises(ValueError) as exc:
            CandidateSet.from_records([{"id": "a", "p": 1.5, "times": [0.0]}])
        assert "out of [0, 1]" in str(exc.value)
        assert "non-positive" in str(exc.value)


class TestOrdering:
    def test_identity(self):
        assert Ordering.identity(3).perm == (0, 1, 2)

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            Ordering((0, 0, 1))
        with pytest.raises(ValueError):
            Ordering((1, 2, 3))

    def test_swapped(self):
        assert Ordering((0, 1, 2)).swapped(0, 2).perm == (2, 1, 0)


class TestPrefixAggregates:
    def test_empty_prefix_convention(self):
        cs = make_set([0.5, 0.4])
        agg = prefix_aggregates(cs, Ordering.identity(2), 0)
        assert (agg.S, agg.T, agg.P, agg.Q) == (0.0, 0.0, 1.0, 1.0)

    def test_two_term_arithmetic(self):
        cs = make_set([0.5, 0.4], [1.0, 1.0])
        agg = prefix_aggregates(cs, Ordering.identity(2), 2)
        assert agg.S == pytest.approx(0.9, rel=1e-15)
        assert agg.T == 2.0
        assert agg.P == pytest.approx(0.2, rel=1e-15)
        assert agg.Q == pytest.approx(0.3, rel=1e-15)

    def test_complement_product(self):
        cs = make_set([0.5, 0.4, 0.3])
        agg = prefix_aggregates(cs, Ordering.identity(3), 2)
        assert agg.Q == pytest.approx((1 - 0.5) * (1 - 0.4), rel=1e-15)

    def test_m_out_of_range(self):
        cs = make_set([0.5])
        with pytest.raises(ValueError, match="out of range"):
            prefix_aggregates(cs, Ordering.identity(1), 2)
        with pytest.raises(ValueError, match="out of range"):
            prefix_aggregates(cs, Ordering.identity(1), -1)

    def test_ordering_size_mismatch(self):
        cs = make_set([0.5, 0.4])
        with pytest.raises(ValueError, match="does not match"):
            prefix_aggregates(cs, Ordering.identity(3), 1)

    def test_log_products_match_linear(self):
        cs = make_set([0.5, 0.4, 0.3])
        log_p, log_q = prefix_log_products(cs, Ordering.identity(3), 3)
        agg = prefix_aggregates(cs, Ordering.identity(3), 3)
        assert math.exp(log_p) == pytest.approx(agg.P, rel=1e-12)
        assert math.exp(log_q) == pytest.approx(agg.Q, rel=1e-12)

    def test_log_products_handle_endpoints(self):
        cs = make_set([0.0, 1.0])
        log_p, log_q = prefix_log_products(cs, Ordering.identity(2), 2)
        assert log_p == -math.inf
        assert log_q == -math.inf

    @given(sets_with_ordering(max_size=6), st.data())
    @settings(max_examples=150)
    def test_recurrence(self, so, data):
        cset, ordering = so
        m = data.draw(st.integers(0, cset.N - 1))
        cur = prefix_aggregates(cset, ordering, m)
        nxt = prefix_aggregates(cset, ordering, m + 1)
        c = cset[ordering[m]]
        assert nxt.S == cur.S + c.p
        assert nxt.T == cur.T + mean_time(c)
        assert nxt.P == cur.P * c.p
        assert nxt.Q == cur.Q * (1.0 - c.p)

    @given(sets_with_ordering(max_size=6), st.data())
    @settings(max_examples=150)
    def test_prefix_permutation_invariance(self, so, data):
        cset, ordering = so
        m = data.draw(st.integers(0, cset.N))
        shuffled_prefix = data.draw(st.permutations(ordering.perm[:m]))
        other = Ordering(tuple(shuffled_prefix) + ordering.perm[m:])
        a = prefix_aggregates(cset, ordering, m)
        b = prefix_aggregates(cset, other, m)
        assert a.S == pytest.approx(b.S, rel=1e-12, abs=1e-15)
        assert a.T == pytest.approx(b.T, rel=1e-12, abs=1e-15)
        assert a.P == pytest.approx(b.P, rel=1e-12, abs=1e-15)
        assert a.Q == pytest.approx(b.Q, rel=1e-12, abs=1e-15)

    @given(st.floats(0.01, 100, allow_nan=False), st.integers(1, 5))
    def test_mean_of_identical_samples(self, t, n):
        assert mean_time(Candidate("a", 0.5, (t,) * n)) == pytest.approx(t, rel=1e-15)


class TestValidate:
    def test_clean_set(self):
        report = validate(make_set([0.5, 0.4, 0.3]))
        assert report.ok
        assert str(report) == "clean"

    def test_probability_out_of_range(self):
        report = validate([{"id": "a", "p": 1.5, "times": [1.0]}])
        assert not report.ok
        assert any("out of [0, 1]" in str(v) and v.field == "p" for v in report.violations)

    def test_non_positive_time(self):
        report = validate([("a", 0.5, [0.0])])
        assert any("non-positive" in v.message and v.field == "times"
                   for v in report.violations)

    def test_empty_set(self):
        report = validate([])
        assert any("empty candidate set" in v.message for v in report.violations)

    def test_duplicate_ids(self):
        report = validate([("a", 0.5, [1.0]), ("a", 0.4, [1.0])])
        assert any("duplicate" in v.message for v in report.violations)

    def test_collects_everything_at_once(self):
        report = validate([("a", 2.0, [0.0]), ("a", "oops", [1.0])])
        fields = {v.field for v in report.violations}
        assert {"p", "times", "id"} <= fields

    @given(candidate_sets(max_size=5))
    @settings(max_examples=50)
    def test_constructed_sets_are_always_clean(self, cset):
        assert validate(cset).ok
