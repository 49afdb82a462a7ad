"""Three problems solved through the warm-started matching solver.

Negative-cycle detection, degree-constrained subgraphs and unit-capacity
min-cost flow each become a perfect matching on a gadget graph.
"""

from warmstart import (
    DCSInstance,
    detect_negative_cycle_via_matching,
    reduce_dcs_to_matching,
    reduce_sp_to_matching,
    solve_01flow,
    solve_dcs,
)
from warmstart.graphcore import DirectedLengthGraph, FlowNetwork

ok = DirectedLengthGraph(3, [(0, 1, -1), (1, 2, -1), (2, 0, 3)])
bad = DirectedLengthGraph(3, [(0, 1, -1), (1, 2, -1), (2, 0, 1)])
for name, g in (("cycle of length 1", ok), ("cycle of length -1", bad)):
    art = reduce_sp_to_matching(g)
    print(f"{name}: gadget has {art.target.m} edges, negative cycle: {detect_negative_cycle_via_matching(g)}")

# Pick exactly two edges at each left vertex and the listed counts on the right.
dcs = DCSInstance(2, 3, [(0, 0, 4), (0, 1, 1), (0, 2, 7), (1, 0, 2), (1, 1, 5), (1, 2, 3)],
                  upper=[2, 2, 1, 2, 1])
art = reduce_dcs_to_matching(dcs)
chosen = solve_dcs(dcs)
print(f"DCS gadget {art.target.n_left}x{art.target.n_right}, chosen edges {chosen}, "
      f"weight {sum(dcs.edges[k][2] for k in chosen)}")

# Two units from 0 to 3 over unit-capacity arcs with costs.
net = FlowNetwork(4, [(0, 1, 1, 2), (0, 2, 1, 4), (1, 2, 1, 1), (1, 3, 1, 6), (2, 3, 1, 2)], 0, 3)
for value in (1, 2):
    flow = solve_01flow(net, value)
    print(f"value {value}: arcs used {[k for k, f in enumerate(flow.flow) if f]}, cost {flow.cost()}")
