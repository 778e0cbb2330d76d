"""Bounding the penalty without evaluating it exactly.

When probabilities are only known to lie in a band [c, d] and times in
[t_min, t_max], closed-form bounds sandwich the exact swap penalty.  This
demo evaluates each bound next to the exact value, and then reproduces the
two documented errata: formulas as printed in the literature that are *not*
valid bounds (see README, Errata).
"""

from trialorder import (
    BoundAssumptions,
    Ordering,
    adjacent_excess_bounds,
    equal_p_swap_excess,
    exact_excess_direct,
    swap_excess_lower_general,
    swap_excess_upper_equal_t,
    swap_excess_upper_general,
)
from trialorder.model import Candidate, CandidateSet


def build(ps, ts):
    return CandidateSet(tuple(
        Candidate(f"m{i}", p, (t,)) for i, (p, t) in enumerate(zip(ps, ts), start=1)
    ))


candidates = build([0.5, 0.4, 0.3], [1.0, 1.0, 1.0])
order = Ordering.identity(3)
exact = exact_excess_direct(candidates, order, k=1, n=2)
print(f"exact penalty of swapping positions 1 and 3: {exact:.4f}\n")

a = BoundAssumptions(c=0.3, d=0.5, t_min=1.0, t_max=1.0, profile="general-upper")
up = swap_excess_upper_general(candidates, order, 1, 2, a)
lo = swap_excess_lower_general(candidates, order, 1, 2, a)
print(f"general bounds:  {lo.lower:.4f} <= {exact:.4f} <= {up.upper:.4f}")

eq = BoundAssumptions(c=0.3, d=0.5, t_min=1.0, t_max=1.0, profile="equal-t-upper")
up_eq = swap_excess_upper_equal_t(candidates, order, 1, 2, eq)
print(f"equal-time upper bound: {up_eq.upper:.4f}  (A={up_eq.A:.4f}, B={up_eq.B:.4f})")

adj = adjacent_excess_bounds(candidates, order, k=1)
print(f"adjacent sandwich at k=1 is tight: "
      f"{adj.lower:.4f} <= {exact_excess_direct(candidates, order, 1, 1):.4f} "
      f"<= {adj.upper:.4f}")

# Violated assumptions are flagged, not fatal: the number is still reported.
narrow = BoundAssumptions(c=0.3, d=0.45, t_min=1.0, t_max=1.0)
res = swap_excess_upper_general(candidates, order, 1, 2, narrow)
print(f"\nwith d=0.45 the band excludes p=0.5: assumptions_ok={res.assumptions_ok}")
for v in res.violations:
    print("  violation:", v)

# --- Erratum 1: the general lower bound as printed -------------------------
same = build([0.55, 0.55, 0.55], [0.5, 0.5, 0.5])
wide = BoundAssumptions(c=0.5, d=0.6, t_min=0.1, t_max=1.0, profile="general-lower")
zero = exact_excess_direct(same, Ordering.identity(3), 1, 2)
printed = swap_excess_lower_general(same, Ordering.identity(3), 1, 2, wide,
                                    use_paper_variant=True)
fixed = swap_excess_lower_general(same, Ordering.identity(3), 1, 2, wide)
print("\nidentical candidates: exact penalty is", zero)
print(f"  printed 'lower bound': {printed.lower:+.4f}  <- exceeds the exact value")
print(f"  corrected lower bound: {fixed.lower:+.4f}  <- valid")

# --- Erratum 2: the equal-probability closed form as printed ---------------
equal_p = build([0.5, 0.5, 0.5], [1.0, 2.0, 4.0])
oracle = exact_excess_direct(equal_p, Ordering.identity(3), 1, 2)
corrected = equal_p_swap_excess(equal_p, Ordering.identity(3), 1, 2)
printed_ep = equal_p_swap_excess(equal_p, Ordering.identity(3), 1, 2,
                                 use_paper_variant=True)
print(f"\nequal-p instance: direct {oracle:.4f}, corrected {corrected:.4f}, "
      f"printed {printed_ep:.4f} (off by exactly (t_kn - t_k)(1-p)^k = 1.5)")
