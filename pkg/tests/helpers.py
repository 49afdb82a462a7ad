"""Seeded random instance builders shared by the test modules."""

from __future__ import annotations

import random

from warmstart.graphcore import BipartiteInstance, DirectedLengthGraph, FlowNetwork, bellman_ford
from warmstart.matching import repair_matching_duals


def random_bipartite(rng: random.Random, n: int, density: float = 1.0, cmax: int = 20) -> BipartiteInstance:
    edges = [(i, j, rng.randint(0, cmax)) for i in range(n) for j in range(n) if rng.random() < density]
    return BipartiteInstance(n, n, edges)


def random_feasible_dual(rng: random.Random, inst: BipartiteInstance, spread: int = 20) -> list[int]:
    return repair_matching_duals(inst, [rng.randint(-spread, spread) for _ in range(inst.n)])


def random_digraph(rng: random.Random, n: int, m: int, lo: int = -5, hi: int = 10) -> DirectedLengthGraph:
    arcs = []
    while len(arcs) < m and n > 1:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            arcs.append((u, v, rng.randint(lo, hi)))
    return DirectedLengthGraph(n, arcs)


def random_digraph_without_negative_cycle(rng: random.Random, n: int, m: int,
                                          lo: int = -5, hi: int = 10) -> DirectedLengthGraph:
    while True:
        g = random_digraph(rng, n, m, lo, hi)
        if not bellman_ford(g).has_negative_cycle:
            return g


def plant_negative_cycle(rng: random.Random, g: DirectedLengthGraph) -> DirectedLengthGraph:
    """Add a cycle through 2-4 vertices whose total length is negative."""
    size = rng.randint(2, min(4, g.n))
    cycle = rng.sample(range(g.n), size)
    lengths = [rng.randint(-5, 5) for _ in cycle]
    total = sum(lengths)
    if total >= 0:
        lengths[0] -= total + rng.randint(1, 3)
    arcs = list(g.arcs)
    arcs += [(cycle[k], cycle[(k + 1) % size], lengths[k]) for k in range(size)]
    return DirectedLengthGraph(g.n, arcs)


def random_network(rng: random.Random, n: int, m: int, cmax: int = 20, unit: bool = False,
                   cost_max: int = 0) -> FlowNetwork:
    arcs = []
    while len(arcs) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            cap = 1 if unit else rng.randint(0, cmax)
            arcs.append((u, v, cap, rng.randint(0, cost_max)))
    return FlowNetwork(n, arcs, 0, n - 1)
