"""Independent ground truth: exhaustive search, Monte Carlo, randomized checks.

Everything here evaluates the expected-time recurrence through its own
vectorized numpy path rather than through schedule.expected_time, so the
closed forms and the scalar evaluator can be cross-checked against a second,
independent implementation.

Determinism contract: results are a pure function of their arguments.  The
simulator partitions trials into fixed-size chunks, each driven by its own
Philox counter-based substream derived from the seed, so the outcome does
not depend on execution order and is bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bounds import (
    BoundAssumptions,
    adjacent_excess_bounds,
    swap_excess_lower_equal_t,
    swap_excess_lower_general,
    swap_excess_upper_equal_t,
    swap_excess_upper_general,
)
from .excess import (
    adjacent_swap_excess,
    equal_p_swap_excess,
    exact_excess_direct,
    general_swap_excess,
)
from .model import Candidate, CandidateSet, Ordering, _check_compatible, mean_time
from .schedule import expected_time, solomonoff_order

__all__ = [
    "MAX_BRUTE_FORCE_N",
    "SimulationResult",
    "BruteForceResult",
    "brute_force_best_order",
    "simulate",
    "VerificationConfig",
    "CheckStats",
    "VerificationReport",
    "verify_bounds_random",
]

MAX_BRUTE_FORCE_N = 10  # 10! = 3.6M permutations keeps desk-scale runtime sane
_PERM_TABLE_MAX_N = 8
_PERM_CHUNK = 50_000
_SIM_CHUNK = 1 << 16


@dataclass(frozen=True)
class SimulationResult:
    """Monte Carlo estimate of the expected solving time for one ordering."""

    trials: int
    mean_time: float
    std_error: float
    success_rate: float
    seed: int
    generator: str = "philox"


@dataclass(frozen=True)
class BruteForceResult:
    """Minimizer of the expected solving time over all N! orderings."""

    best_order: Ordering
    best_expected_time: float
    evaluated: int


def _eq2_for_perms(p: np.ndarray, t: np.ndarray, perms: np.ndarray) -> np.ndarray:
    """Expected time (failure tail included) for each permutation row."""
    P = p[perms]
    Tm = np.cumsum(t[perms], axis=1)
    Qfull = np.cumprod(1.0 - P, axis=1)
    Qprev = np.concatenate([np.ones((perms.shape[0], 1)), Qfull[:, :-1]], axis=1)
    return (Tm * Qprev * P).sum(axis=1) + Tm[:, -1] * Qfull[:, -1]


@lru_cache(maxsize=None)
def _perm_table(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def brute_force_best_order(cset: CandidateSet) -> BruteForceResult:
    """Enumerate every ordering, evaluate its expected time, return the best.

    Ties are broken by the lexicographically smallest permutation, so the
    result is deterministic regardless of how the evaluation is batched.
    """
    N = cset.N
    if N > MAX_BRUTE_FORCE_N:
        raise ValueError(f"N={N} exceeds the brute-force guard of {MAX_BRUTE_FORCE_N}")
    p = np.array([c.p for c in cset])
    t = np.array([mean_time(c) for c in cset])

    best_val = math.inf
    best_perm: tuple[int, ...] | None = None
    if N <= _PERM_TABLE_MAX_N:
        table = _perm_table(N)
        vals = _eq2_for_perms(p, t, table)
        i = int(np.argmin(vals))  # argmin returns the first (lex-smallest) minimum
        best_val = float(vals[i])
        best_perm = tuple(int(x) for x in table[i])
    else:
        perms_iter = itertools.permutations(range(N))
        while True:
            chunk = list(itertools.islice(perms_iter, _PERM_CHUNK))
            if not chunk:
                break
            arr = np.array(chunk, dtype=np.intp)
            vals = _eq2_for_perms(p, t, arr)
            i = int(np.argmin(vals))
            if vals[i] < best_val:  # strict: earlier lex order wins ties
                best_val = float(vals[i])
                best_perm = tuple(int(x) for x in arr[i])
    assert best_perm is not None
    return BruteForceResult(
        best_order=Ordering(best_perm),
        best_expected_time=best_val,
        evaluated=math.factorial(N),
    )


def simulate(cset: CandidateSet, ordering: Ordering, trials: int, seed: int) -> SimulationResult:
    """Monte Carlo estimate of the expected solving time along ``ordering``.

    Per trial: walk the ordering, draw an independent success event with each
    candidate's probability, draw that attempt's execution time uniformly
    from the candidate's observed samples, and accumulate time until the
    first success or exhaustion (the failure tail is therefore included).
    """
    _check_compatible(cset, ordering)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    ordered = [cset[i] for i in ordering.perm]
    N = len(ordered)
    p = np.array([c.p for c in ordered])
    samples = [np.asarray(c.time_samples, dtype=float) for c in ordered]

    time_sum = 0.0
    time_sqsum = 0.0
    wins = 0
    base = np.random.Philox(seed)
    n_chunks = (trials + _SIM_CHUNK - 1) // _SIM_CHUNK
    for chunk_index in range(n_chunks):
        m = min(_SIM_CHUNK, trials - chunk_index * _SIM_CHUNK)
        bitgen = base if chunk_index == 0 else base.jumped(chunk_index)
        g = np.random.Generator(bitgen)
        u = g.random((m, N))
        success = u < p
        tdraw = np.empty((m, N))
        for j in range(N):
            if len(samples[j]) == 1:
                tdraw[:, j] = samples[j][0]
            else:
                tdraw[:, j] = samples[j][g.integers(0, len(samples[j]), size=m)]
        any_success = success.any(axis=1)
        attempts = np.where(any_success, success.argmax(axis=1) + 1, N)
        cum = np.cumsum(tdraw, axis=1)
        totals = np.take_along_axis(cum, (attempts - 1)[:, None], axis=1)[:, 0]
        time_sum += float(totals.sum())
        time_sqsum += float((totals * totals).sum())
        wins += int(any_success.sum())

    mean = time_sum / trials
    if trials > 1:
        var = max(0.0, (time_sqsum - trials * mean * mean) / (trials - 1))
        std_error = math.sqrt(var / trials)
    else:
        std_error = 0.0
    return SimulationResult(
        trials=trials,
        mean_time=mean,
        std_error=std_error,
        success_rate=wins / trials,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Randomized verification of the closed forms against the oracles.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationConfig:
    """Generator ranges and tolerances for verify_bounds_random.

    ``identity_tol`` is absolute (double-precision accumulation over <= 10
    terms), ``sandwich_slack`` is the absolute slack allowed on each bound
    inequality.  ``equal_p_only`` pins the generator to equal-probability
    instances and additionally counts how often the as-printed equal-p
    formula misses the oracle (it should miss on every instance whose swapped
    candidates have different times — see README, Errata).
    """

    instances: int
    seed: int
    n_candidates: tuple[int, int] = (2, 8)
    p_range: tuple[float, float] = (0.05, 0.95)
    t_range: tuple[float, float] = (0.1, 10.0)
    max_samples: int = 3
    identity_tol: float = 1e-10
    sandwich_slack: float = 1e-9
    optimality_rel_tol: float = 1e-9
    optimality_max_n: int = 8
    equal_p_only: bool = False

    def __post_init__(self) -> None:
        if self.instances < 0:
            raise ValueError(f"instances must be >= 0, got {self.instances}")
        if not 2 <= self.n_candidates[0] <= self.n_candidates[1]:
            raise ValueError(f"invalid candidate-count range {self.n_candidates}")
        if not 0.0 < self.p_range[0] <= self.p_range[1] < 1.0:
            raise ValueError(f"p_range must sit strictly inside (0, 1): {self.p_range}")
        if not 0.0 < self.t_range[0] <= self.t_range[1]:
            raise ValueError(f"t_range must be positive and ordered: {self.t_range}")
        if self.max_samples < 1:
            raise ValueError(f"max_samples must be >= 1, got {self.max_samples}")


@dataclass(frozen=True)
class CheckStats:
    name: str
    runs: int
    failures: int
    max_residual: float


@dataclass(frozen=True)
class VerificationReport:
    instances: int
    seed: int
    equal_p_only: bool
    checks: tuple[CheckStats, ...]

    @property
    def total_failures(self) -> int:
        return sum(c.failures for c in self.checks)

    @property
    def passed(self) -> bool:
        return self.total_failures == 0

    def stats(self, name: str) -> CheckStats:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "instances": self.instances,
            "seed": self.seed,
            "equal_p_only": self.equal_p_only,
            "total_failures": self.total_failures,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "runs": c.runs,
                    "failures": c.failures,
                    "max_residual": c.max_residual,
                }
                for c in self.checks
            ],
        }


class _Tally:
    def __init__(self) -> None:
        self._stats: dict[str, list] = {}

    def record(self, name: str, residual: float, ok: bool) -> None:
        runs = self._stats.setdefault(name, [0, 0, 0.0])
        runs[0] += 1
        runs[1] += 0 if ok else 1
        runs[2] = max(runs[2], residual)

    def as_checks(self) -> tuple[CheckStats, ...]:
        return tuple(
            CheckStats(name=k, runs=v[0], failures=v[1], max_residual=v[2])
            for k, v in self._stats.items()
        )


def _build_set(ps, tss) -> CandidateSet:
    return CandidateSet(tuple(
        Candidate(f"c{i + 1}", float(p), tuple(float(t) for t in ts))
        for i, (p, ts) in enumerate(zip(ps, tss))
    ))


def _draw_times(rng, cfg, n):
    return [rng.uniform(*cfg.t_range, size=int(rng.integers(1, cfg.max_samples + 1)))
            for _ in range(n)]


def _draw_kn(rng, n):
    k = int(rng.integers(1, n))
    nn = int(rng.integers(1, n - k + 1))
    return k, nn


def verify_bounds_random(config: VerificationConfig) -> VerificationReport:
    """Cross-validate every closed form on randomly generated instances.

    Per instance the default mode checks, against the direct-difference and
    brute-force oracles: the q-decomposition identity, its n=1 reduction to
    the adjacent closed form, the four bound sandwiches on
    premise-satisfying constructions, the corrected equal-p identity, and
    rule optimality for N <= optimality_max_n.  Failures are report entries,
    never exceptions.
    """
    rng = np.random.default_rng(config.seed)
    tally = _Tally()
    tol = config.identity_tol
    slack = config.sandwich_slack

    for _ in range(config.instances):
        if config.equal_p_only:
            _equal_p_checks(rng, config, tally)
            continue

        N = int(rng.integers(config.n_candidates[0], config.n_candidates[1] + 1))
        cset = _build_set(rng.uniform(*config.p_range, N), _draw_times(rng, config, N))
        order = solomonoff_order(cset)
        k, n = _draw_kn(rng, N)

        # Exactness of the q-decomposition, and its adjacent reduction.
        direct = exact_excess_direct(cset, order, k, n)
        rep = general_swap_excess(cset, order, k, n)
        tally.record("decomposition-identity", abs(rep.total - direct),
                     abs(rep.total - direct) <= tol)
        ka = int(rng.integers(1, N))
        adj = adjacent_swap_excess(cset, order, ka)
        dadj = exact_excess_direct(cset, order, ka, 1)
        tally.record("adjacent-exact", abs(adj - dadj), abs(adj - dadj) <= tol)
        radj = general_swap_excess(cset, order, ka, 1).total
        tally.record("adjacent-reduction", abs(radj - adj), abs(radj - adj) <= tol)

        badj = adjacent_excess_bounds(cset, order, ka)
        res_adj = max(badj.lower - dadj, dadj - badj.upper)
        tally.record("sandwich-adjacent", max(0.0, res_adj), res_adj <= slack)

        # General upper bound on the ratio-sorted order; premises by construction.
        ps = [c.p for c in cset]
        mts = [mean_time(c) for c in cset]
        a_up = BoundAssumptions(c=min(ps), d=max(ps), t_min=min(mts), t_max=max(mts),
                                profile="general-upper")
        up = swap_excess_upper_general(cset, order, k, n, a_up)
        res_up = direct - up.upper
        tally.record("sandwich-upper-general", max(0.0, res_up),
                     up.assumptions_ok and res_up <= slack)

        # General lower bound: build a premise-satisfying instance
        # (p descending, t ascending is ratio-sorted and satisfies the
        # p_k >= p_{k+n}, t_k <= t_{k+n} swap premises for every pair).
        ps_lo = np.sort(rng.uniform(*config.p_range, N))[::-1]
        ts_lo = sorted(_draw_times(rng, config, N), key=lambda s: float(np.mean(s)))
        cset_lo = _build_set(ps_lo, ts_lo)
        order_lo = Ordering.identity(N)
        k2, n2 = _draw_kn(rng, N)
        mts_lo = [mean_time(c) for c in cset_lo]
        a_lo = BoundAssumptions(c=float(ps_lo.min()), d=float(ps_lo.max()),
                                t_min=min(mts_lo), t_max=max(mts_lo),
                                profile="general-lower")
        lo = swap_excess_lower_general(cset_lo, order_lo, k2, n2, a_lo)
        exc_lo = exact_excess_direct(cset_lo, order_lo, k2, n2)
        res_lo = lo.lower - exc_lo
        tally.record("sandwich-lower-general", max(0.0, res_lo),
                     lo.assumptions_ok and res_lo <= slack)

        # Equal-time sandwich.
        ps_eq = rng.uniform(*config.p_range, N)
        T_eq = float(rng.uniform(*config.t_range))
        cset_eq = _build_set(ps_eq, [[T_eq]] * N)
        order_eq = solomonoff_order(cset_eq)
        k3, n3 = _draw_kn(rng, N)
        a_eq = BoundAssumptions(c=float(ps_eq.min()), d=float(ps_eq.max()),
                                t_min=T_eq, t_max=T_eq, profile="equal-t-upper")
        exc_eq = exact_excess_direct(cset_eq, order_eq, k3, n3)
        up_eq = swap_excess_upper_equal_t(cset_eq, order_eq, k3, n3, a_eq)
        lo_eq = swap_excess_lower_equal_t(cset_eq, order_eq, k3, n3, a_eq)
        res_uq = exc_eq - up_eq.upper
        res_lq = lo_eq.lower - exc_eq
        tally.record("sandwich-upper-equal-t", max(0.0, res_uq),
                     up_eq.assumptions_ok and res_uq <= slack)
        tally.record("sandwich-lower-equal-t", max(0.0, res_lq),
                     lo_eq.assumptions_ok and res_lq <= slack)

        _equal_p_checks(rng, config, tally, count_paper_variant=False)

        # Rule optimality against exhaustive search.
        if N <= config.optimality_max_n:
            bf = brute_force_best_order(cset)
            rule = expected_time(cset, order)
            res_opt = abs(rule - bf.best_expected_time)
            tally.record("optimality", res_opt,
                         res_opt <= config.optimality_rel_tol
                         * max(1.0, bf.best_expected_time))

    return VerificationReport(
        instances=config.instances,
        seed=config.seed,
        equal_p_only=config.equal_p_only,
        checks=tally.as_checks(),
    )


def _equal_p_checks(rng, config, tally, count_paper_variant: bool | None = None) -> None:
    """Equal-probability instance: corrected identity, optional erratum count."""
    if count_paper_variant is None:
        count_paper_variant = config.equal_p_only
    N = int(rng.integers(max(2, config.n_candidates[0]), config.n_candidates[1] + 1))
    p = float(rng.uniform(*config.p_range))
    cset = _build_set([p] * N, _draw_times(rng, config, N))
    order = Ordering.identity(N)  # the equal-p closed form is exact for any order
    k, n = _draw_kn(rng, N)
    direct = exact_excess_direct(cset, order, k, n)
    corr = equal_p_swap_excess(cset, order, k, n)
    tally.record("equal-p-corrected", abs(corr - direct), abs(corr - direct) <= config.identity_tol)
    if count_paper_variant:
        tk = mean_time(cset[order[k - 1]])
        tkn = mean_time(cset[order[k + n - 1]])
        if tk != tkn:
            paper = equal_p_swap_excess(cset, order, k, n, use_paper_variant=True)
            # "failure" means the printed formula misses the oracle, which it
            # does by exactly (t_{k+n} - t_k) (1-p)^k on every such instance.
            tally.record("equal-p-paper-variant", abs(paper - direct),
                         abs(paper - direct) <= config.identity_tol)
