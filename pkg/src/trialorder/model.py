"""Core domain types: candidates, candidate sets, orderings, prefix aggregates.

A candidate is one way of attempting a problem: a success probability ``p`` in
[0, 1] and one or more strictly positive observed execution times (arbitrary
but consistent time unit).  A candidate set is an ordered collection of
candidates; its input order doubles as the identity ordering and as the
tie-break key everywhere.  Everything downstream (the ordering rule, penalty
formulas, bounds, oracles) consumes these types.

All types are immutable after construction and all operations are pure, so
unrestricted concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "Candidate",
    "CandidateSet",
    "Ordering",
    "PrefixAggregates",
    "Violation",
    "ValidationReport",
    "mean_time",
    "ratio",
    "prefix_aggregates",
    "prefix_log_products",
    "validate",
]


@dataclass(frozen=True)
class Violation:
    """One violated invariant: where it was found, which field, and why."""

    subject: str
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.subject}: field '{self.field}': {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "clean"
        return "; ".join(str(v) for v in self.violations)


def _value_violations(subject: str, p, times) -> list[Violation]:
    out: list[Violation] = []
    try:
        p = float(p)
    except (TypeError, ValueError):
        out.append(Violation(subject, "p", f"not a number: {p!r}"))
        p = None
    if p is not None and not (0.0 <= p <= 1.0):
        out.append(Violation(subject, "p", f"probability {p!r} out of [0, 1]"))

    try:
        times = tuple(times)
    except TypeError:
        out.append(Violation(subject, "times", f"not a sequence: {times!r}"))
        return out
    if not times:
        out.append(Violation(subject, "times", "no execution time samples"))
    for t in times:
        try:
            t = float(t)
        except (TypeError, ValueError):
            out.append(Violation(subject, "times", f"not a number: {t!r}"))
            continue
        if not math.isfinite(t):
            out.append(Violation(subject, "times", f"non-finite time sample {t!r}"))
        elif t <= 0.0:
            out.append(Violation(subject, "times", f"non-positive time sample {t!r}"))
    return out


@dataclass(frozen=True)
class Candidate:
    """One solution candidate: success probability plus observed run times.

    ``p = 0`` and ``p = 1`` are admitted here; operations whose closed forms
    need ``p`` strictly inside (0, 1) enforce that locally.  Times must be
    strictly positive (success-to-time ratios divide by the mean time).
    """

    id: str
    p: float
    time_samples: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "p", float(self.p))
        try:
            samples = tuple(float(t) for t in self.time_samples)
        except (TypeError, ValueError):
            samples = self.time_samples  # let the checker report it
        object.__setattr__(self, "time_samples", samples)
        problems = _value_violations(f"candidate {self.id!r}", self.p, self.time_samples)
        if problems:
            raise ValueError("; ".join(str(v) for v in problems))


@dataclass(frozen=True)
class CandidateSet:
    """Ordered, immutable collection of candidates with unique ids."""

    candidates: tuple[Candidate, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "candidates", tuple(self.candidates))
        if not self.candidates:
            raise ValueError("empty candidate set")
        seen: set[str] = set()
        for c in self.candidates:
            if c.id in seen:
                raise ValueError(f"duplicate candidate id {c.id!r}")
            seen.add(c.id)

    @property
    def N(self) -> int:
        return len(self.candidates)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.candidates)

    def __len__(self) -> int:
        return len(self.candidates)

    def __iter__(self) -> Iterator[Candidate]:
        return iter(self.candidates)

    def __getitem__(self, i: int) -> Candidate:
        return self.candidates[i]

    @classmethod
    def from_records(cls, records: Iterable) -> "CandidateSet":
        """Build a set from raw records, reporting every violation at once.

        A record is a mapping with keys ``id``, ``p``, ``times`` (or
        ``time_samples``), a 3-sequence ``(id, p, times)``, or a Candidate.
        """
        records = list(records)
        report = validate(records)
        if not report.ok:
            raise ValueError(str(report))
        return cls(tuple(Candidate(rid, p, times) for rid, p, times in
                         (_coerce_record(r, i) for i, r in enumerate(records))))


def _coerce_record(rec, i: int):
    """Extract (id, p, times) from a record without validating values."""
    if isinstance(rec, Candidate):
        return rec.id, rec.p, rec.time_samples
    if isinstance(rec, Mapping):
        rid = rec.get("id", f"#{i}")
        times = rec.get("times", rec.get("time_samples", ()))
        return str(rid), rec.get("p"), times
    rid, p, times = rec
    return str(rid), p, times


@dataclass(frozen=True)
class Ordering:
    """A permutation of candidate indices 0..N-1 defining the trial sequence."""

    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        perm = tuple(int(i) for i in self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"perm {perm!r} is not a permutation of 0..{len(perm) - 1}")

    @classmethod
    def identity(cls, n: int) -> "Ordering":
        return cls(tuple(range(n)))

    def swapped(self, i: int, j: int) -> "Ordering":
        """New ordering with 0-based positions i and j interchanged."""
        perm = list(self.perm)
        perm[i], perm[j] = perm[j], perm[i]
        return Ordering(tuple(perm))

    def __len__(self) -> int:
        return len(self.perm)

    def __iter__(self) -> Iterator[int]:
        return iter(self.perm)

    def __getitem__(self, i: int) -> int:
        return self.perm[i]


@dataclass(frozen=True)
class PrefixAggregates:
    """Running quantities over the first m candidates of an ordering.

    S: sum of probabilities, T: sum of mean times, P: product of
    probabilities, Q: product of complements (1 - p).  For the empty prefix
    S = T = 0 and P = Q = 1.
    """

    S: float
    T: float
    P: float
    Q: float


def mean_time(c: Candidate) -> float:
    """Arithmetic mean of the candidate's execution time samples."""
    return math.fsum(c.time_samples) / len(c.time_samples)


def ratio(c: Candidate) -> float:
    """Success-probability-to-mean-time ratio p / mean_time, the ordering score."""
    return c.p / mean_time(c)


def _check_compatible(cset: CandidateSet, ordering: Ordering) -> None:
    if len(ordering) != cset.N:
        raise ValueError(
            f"ordering over {len(ordering)} positions does not match set of size {cset.N}"
        )


def prefix_aggregates(cset: CandidateSet, ordering: Ordering, m: int) -> PrefixAggregates:
    """S, T, P, Q over the first m candidates of ``ordering``.

    Computed in linear space; for large N (P and Q underflow past a few
    hundred factors) see prefix_log_products.
    """
    _check_compatible(cset, ordering)
    if not 0 <= m <= cset.N:
        raise ValueError(f"prefix length m={m} out of range 0..{cset.N}")
    S = T = 0.0
    P = Q = 1.0
    for idx in ordering.perm[:m]:
        c = cset[idx]
        S += c.p
        T += mean_time(c)
        P *= c.p
        Q *= 1.0 - c.p
    return PrefixAggregates(S=S, T=T, P=P, Q=Q)


def prefix_log_products(cset: CandidateSet, ordering: Ordering, m: int) -> tuple[float, float]:
    """(log P_m, log Q_m) via summed logs, the underflow-safe path for N > ~1000.

    A zero factor (p = 0 for P, p = 1 for Q) yields -inf.
    """
    _check_compatible(cset, ordering)
    if not 0 <= m <= cset.N:
        raise ValueError(f"prefix length m={m} out of range 0..{cset.N}")
    log_p = 0.0
    log_q = 0.0
    for idx in ordering.perm[:m]:
        c = cset[idx]
        log_p += math.log(c.p) if c.p > 0.0 else -math.inf
        log_q += math.log1p(-c.p) if c.p < 1.0 else -math.inf
    return log_p, log_q


def validate(candidates: Union[CandidateSet, Iterable]) -> ValidationReport:
    """List every violated invariant of a candidate set, or report clean.

    Accepts a constructed CandidateSet (always clean by construction) or raw
    records (see CandidateSet.from_records), which is what file ingestion
    uses to surface all problems at once: probability out of range,
    non-positive time, empty sample list, duplicate id, empty set.
    """
    out: list[Violation] = []
    if isinstance(candidates, CandidateSet):
        rows: Sequence = [(c.id, c.p, c.time_samples) for c in candidates]
    else:
        rows = []
        for i, rec in enumerate(candidates):
            try:
                rows.append(_coerce_record(rec, i))
            except (TypeError, ValueError):
                out.append(Violation(f"record #{i}", "record", f"malformed record: {rec!r}"))

    if not rows and not out:
        out.append(Violation("set", "candidates", "empty candidate set"))
    seen: set[str] = set()
    for rid, p, times in rows:
        subject = f"candidate {rid!r}"
        out.extend(_value_violations(subject, p, times))
        if rid in seen:
            out.append(Violation(subject, "id", f"duplicate candidate id {rid!r}"))
        seen.add(rid)
    return ValidationReport(tuple(out))
