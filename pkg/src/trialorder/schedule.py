"""The optimal trial-ordering rule and expected-solving-time evaluation.

The rule is the classic one attributed to Solomonoff's betting scenario: try
candidates in decreasing order of p / t, where t is the candidate's mean
execution time.  That order minimizes the expected total time until the
first success.

For an ordering (1..N along the permutation) the expected time is

    E = sum_{k=1..N} T_k * Q_{k-1} * p_k  [+ T_N * Q_N]

with T_k the cumulative mean time and Q_k the cumulative product of (1 - p)
along the ordering.  The bracketed failure tail is the time spent
discovering that every candidate fails; it is identical for every
permutation of the same set, so it cancels in order comparisons and swap
penalties.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import CandidateSet, Ordering, _check_compatible, mean_time, ratio

__all__ = [
    "ExpectationOptions",
    "solomonoff_order",
    "expected_time",
    "is_ratio_sorted",
    "failure_tail_term",
]


@dataclass(frozen=True)
class ExpectationOptions:
    """Whether expected_time adds the all-candidates-fail tail (default: yes)."""

    include_failure_tail: bool = True


def solomonoff_order(cset: CandidateSet) -> Ordering:
    """Permutation sorted by p/mean-time ratio, descending; ties keep input order.

    Ratios are compared exactly (no epsilon): transposing two adjacent
    candidates with equal ratios provably leaves the expected time unchanged,
    so any deterministic tie-break is correct, and the stable one is
    reproducible.
    """
    scores = [ratio(c) for c in cset]
    perm = sorted(range(cset.N), key=lambda i: -scores[i])
    return Ordering(tuple(perm))


def expected_time(
    cset: CandidateSet,
    ordering: Ordering,
    opts: ExpectationOptions | None = None,
) -> float:
    """Expected total time until first success for the given trial order.

    With the failure tail included (the default) this is the full expected
    running time, counting the time to learn that everything failed.  Without
    it, the success-only sum is reported verbatim; note it is not a
    conditional expectation — its weights sum to 1 - Q_N, not 1.
    """
    _check_compatible(cset, ordering)
    if opts is None:
        opts = ExpectationOptions()
    total = 0.0
    T = 0.0
    Q = 1.0
    for idx in ordering.perm:
        c = cset[idx]
        T += mean_time(c)
        total += T * Q * c.p
        Q *= 1.0 - c.p
    if opts.include_failure_tail:
        total += T * Q
    return total


def is_ratio_sorted(cset: CandidateSet, ordering: Ordering) -> bool:
    """True iff p/t ratios are non-increasing along the ordering."""
    _check_compatible(cset, ordering)
    scores = [ratio(cset[idx]) for idx in ordering.perm]
    return all(a >= b for a, b in zip(scores, scores[1:]))


def failure_tail_term(cset: CandidateSet, ordering: Ordering | None = None) -> float:
    """The all-fail term T_N * Q_N, accumulated along the given ordering.

    Mathematically invariant under permutation; taking an explicit ordering
    lets callers confirm that numerically.
    """
    if ordering is None:
        ordering = Ordering.identity(cset.N)
    _check_compatible(cset, ordering)
    T = 0.0
    Q = 1.0
    for idx in ordering.perm:
        c = cset[idx]
        T += mean_time(c)
        Q *= 1.0 - c.p
    return T * Q
