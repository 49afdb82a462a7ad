"""Warm-starting min-cost perfect matching from a predicted dual.

Shows how the work after the first Hopcroft-Karp call shrinks as the
prediction gets closer to an optimal dual.
"""

import random

from warmstart import measure_error, optimal_matching_dual, repair_matching_duals, solve_mwpm
from warmstart.graphcore import BipartiteInstance

rng = random.Random(1)
n = 8
inst = BipartiteInstance(n, n, [(i, j, rng.randint(0, 30)) for i in range(n) for j in range(n)])
y_opt = optimal_matching_dual(inst)
print("optimal dual:", y_opt)

# Corrupt k coordinates of the optimum, repair, and watch the counters.
print(f"{'k':>2} {'l0':>3} {'first':>5} {'iters':>5} {'augm':>4} cost")
for k in range(0, 2 * n + 1, 2):
    pred = list(y_opt)
    for v in rng.sample(range(2 * n), k):
        pred[v] += rng.choice([-3, 3])
    y = repair_matching_duals(inst, pred)
    res = solve_mwpm(inst, y)
    c = res.counters
    print(f"{k:>2} {measure_error(y, y_opt).l0:>3} {c.first_match_size:>5} "
          f"{c.while_iterations:>5} {c.ff_augmentations:>4} {res.total_cost}")

# A cold start is just the all-zero dual.
cold = solve_mwpm(inst, [0] * inst.n)
print("cold start while_iterations:", cold.counters.while_iterations)
