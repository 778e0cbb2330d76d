"""How much does getting the order wrong cost?

Transposing two candidates of the optimal order raises the expected solving
time by a quantifiable penalty ("excess").  The package computes it three
ways that must agree: subtracting the two expected times directly, the
adjacent closed form, and the general q1 + q2 + q3 decomposition.
"""

from trialorder import (
    Ordering,
    adjacent_swap_excess,
    exact_excess_direct,
    expected_time,
    general_swap_excess,
    solomonoff_order,
)
from trialorder.model import Candidate, CandidateSet

candidates = CandidateSet(tuple(
    Candidate(f"m{i}", p, (t,))
    for i, (p, t) in enumerate([(0.5, 1.0), (0.4, 1.0), (0.3, 1.0)], start=1)
))
order = solomonoff_order(candidates)
print("reference order:", [candidates[i].id for i in order])
print("expected time:  ", expected_time(candidates, order))

# Swap the 1st and 3rd candidates (k=1, distance n=2).
swapped = order.swapped(0, 2)
print("\nafter swapping positions 1 and 3:", [candidates[i].id for i in swapped])
print("expected time:                   ", expected_time(candidates, swapped))

direct = exact_excess_direct(candidates, order, k=1, n=2)
rep = general_swap_excess(candidates, order, k=1, n=2)
print(f"\npenalty, direct difference:  {direct:.4f}")
print(f"penalty, q-decomposition:    {rep.total:.4f}"
      f"  (q1={rep.q1:.2f}, q2={rep.q2:.2f}, q3={rep.q3:.2f})")

# Adjacent swaps have a one-line closed form.
adj = adjacent_swap_excess(candidates, order, k=1)
print(f"\nadjacent swap at k=1:        {adj:.4f}"
      f"  (direct: {exact_excess_direct(candidates, order, 1, 1):.4f})")

# Swapping back undoes the damage exactly.
back = exact_excess_direct(candidates, swapped, k=1, n=2)
print(f"swap back from the bad order: {back:.4f} (antisymmetry)")
