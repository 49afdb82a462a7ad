"""Rounding a predicted potential until every reduced arc length is non-negative.

Then the same potential drives Dijkstra for exact distances with negative arcs.
"""

from warmstart import apsp_with_prediction, re_feasible, round_re_duals, sssp_with_dual
from warmstart.graphcore import DirectedLengthGraph, OpCounters, bellman_ford

g = DirectedLengthGraph(5, [
    (0, 1, 4), (0, 2, -2), (2, 1, 3), (1, 3, -4), (2, 3, 6), (3, 4, 2), (4, 2, 1),
])
y_bf = bellman_ford(g).dual
print("Bellman-Ford potential:", y_bf)

for pred in ([0, 0, 0, 0, 0], y_bf, [v + 2 for v in y_bf], [5, -5, 5, -5, 5]):
    counters = OpCounters()
    layers = []
    y = round_re_duals(g, pred, counters, on_iteration=lambda st: layers.append(st.chosen))
    print(f"prediction {pred} -> {y}  iterations {counters.round_iterations}  "
          f"layers picked {layers}  feasible {re_feasible(g, y)[0]}")

y = round_re_duals(g, [0] * g.n)
print("distances from 0:", sssp_with_dual(g, 0, y))
for row in apsp_with_prediction(g, y):
    print(row)
