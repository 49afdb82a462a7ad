"""Shortest paths with possibly negative arc lengths, warm-started by predicted potentials.

A potential ``y`` is *feasible* for a directed graph when every reduced length
``l(u,v) + y_u - y_v`` is non-negative. Given one, Dijkstra computes exact
distances. :func:`round_re_duals` turns an arbitrary integer prediction into
a feasible potential by repeatedly lowering a deep layer of the graph of
non-positive reduced arcs; its iteration count shrinks with the prediction
error.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

from .errors import Disconnected, InfeasibleDual, InvariantViolation, NegativeCycleError
from .graphcore import (
    UNREACHED,
    DirectedLengthGraph,
    DualVector,
    OpCounters,
    bellman_ford,
    dijkstra_with_potentials,
)


def re_feasible(g: DirectedLengthGraph, y: Sequence[int]) -> tuple[bool, int | None]:
    """Return ``(True, None)`` if ``y`` is feasible, else ``(False, first_bad_arc_id)``."""
    for k, (u, v, length) in enumerate(g.arcs):
        if length + y[u] - y[v] < 0:
            return False, k
    return True, None


def strongly_connected_components(n: int, out: Sequence[Sequence[int]]) -> list[int]:
    """Component index per vertex (iterative Tarjan).

    Components are numbered in reverse topological order: an arc between
    two different components always goes from a higher to a lower index.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            u, pos = work[-1]
            if pos < len(out[u]):
                work[-1] = (u, pos + 1)
                v = out[u][pos]
                if index[v] == -1:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = True
                    work.append((v, 0))
                elif on_stack[v]:
                    low[u] = min(low[u], index[v])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[u])
            if low[u] == index[u]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == u:
                        break
                n_comp += 1
    return comp


@dataclass
class LayeredState:
    """Snapshot of one rounding iteration.

    ``layer[v]`` is minus the shortest distance to ``v`` from the virtual
    root over non-positive reduced arcs (SCCs contracted). ``chosen`` is the
    layer index from which every vertex was lowered.
    """

    iteration: int
    layer: list[int]
    chosen: int
    duals: DualVector

    @property
    def max_layer(self) -> int:
        return max(self.layer, default=0)


def _layers(g: DirectedLengthGraph, y: Sequence[int]) -> list[int]:
    """Layer index per vertex for the current potential; raises on a negative cycle."""
    n = g.n
    nonpos = [k for k in range(g.m) if g.reduced_length(k, y) <= 0]
    out: list[list[int]] = [[] for _ in range(n)]
    for k in nonpos:
        out[g.arcs[k][0]].append(g.arcs[k][1])
    comp = strongly_connected_components(n, out)
    n_comp = max(comp, default=-1) + 1

    # Arcs inside a component must be zero, else a cycle of them is negative.
    incoming: list[list[tuple[int, int]]] = [[] for _ in range(n_comp)]
    for k in nonpos:
        u, v, _ = g.arcs[k]
        r = g.reduced_length(k, y)
        if comp[u] == comp[v]:
            if r != 0:
                raise NegativeCycleError(
                    f"arc {k} of reduced length {r} lies on a non-positive cycle")
        else:
            incoming[comp[v]].append((comp[u], r))

    # Tarjan numbering is reverse topological, so sources have the highest index.
    dist = [0] * n_comp
    for c in range(n_comp - 1, -1, -1):
        for src, r in incoming[c]:
            if dist[src] + r < dist[c]:
                dist[c] = dist[src] + r
    return [-dist[comp[v]] for v in range(n)]


def round_re_duals(g: DirectedLengthGraph, predicted: Sequence[int],
                   counters: OpCounters | None = None, debug: bool = False,
                   on_iteration: Callable[[LayeredState], None] | None = None,
                   ) -> DualVector:
    """Round a predicted potential to a feasible one.

    Each iteration builds the layers of the graph of arcs with non-positive
    reduced length, picks the most populated layer ``i* >= 1`` (ties go to
    the deeper layer) and lowers every vertex in layers ``>= i*`` by one.
    Arcs that are non-negative stay non-negative, and negative arcs only
    grow, so the loop converges when the graph has no negative cycle.

    A negative cycle is reported as :class:`NegativeCycleError`, either when
    a non-positive cycle with a negative arc shows up in the layer graph, or
    from a Bellman-Ford check run once the loop has taken more than ``n``
    iterations.

    ``debug=True`` asserts per iteration that the set of non-negative arcs
    never shrinks and negative arcs never get shorter. ``on_iteration``
    receives a :class:`LayeredState` after each update.
    """
    if len(predicted) != g.n:
        raise ValueError(f"prediction has length {len(predicted)}, expected {g.n}")
    counters = counters if counters is not None else OpCounters()
    y = list(predicted)
    cap = None
    iterations = 0
    prev = [g.reduced_length(k, y) for k in range(g.m)] if debug else None

    while any(g.reduced_length(k, y) < 0 for k in range(g.m)):
        if cap is None and iterations >= g.n:
            bf = bellman_ford(g, None, counters)
            if bf.has_negative_cycle:
                raise NegativeCycleError(cycle=bf.negative_cycle)
            err = [abs(a - b) for a, b in zip(predicted, bf.dual)]
            cap = 2 * sum(err) * (max(err, default=0) + 1) + g.n
        if cap is not None and iterations > cap:
            raise InvariantViolation(f"rounding exceeded {cap} iterations without a negative cycle")

        layer = _layers(g, y)
        sizes: dict[int, int] = {}
        for i in layer:
            if i >= 1:
                sizes[i] = sizes.get(i, 0) + 1
        chosen = max(sizes, key=lambda i: (sizes[i], i))
        for v in range(g.n):
            if layer[v] >= chosen:
                y[v] -= 1
        iterations += 1
        counters.round_iterations += 1

        if debug:
            cur = [g.reduced_length(k, y) for k in range(g.m)]
            for k, (before, after) in enumerate(zip(prev, cur)):
                if before >= 0 and after < 0:
                    raise InvariantViolation(f"arc {k} turned negative: {before} -> {after}")
                if before < 0 and after < before:
                    raise InvariantViolation(f"negative arc {k} got shorter: {before} -> {after}")
            prev = cur
        if on_iteration is not None:
            on_iteration(LayeredState(iterations, layer, chosen, list(y)))
    return y


def sssp_with_dual(g: DirectedLengthGraph, source: int, feasible_y: Sequence[int],
                   counters: OpCounters | None = None) -> list[int | None]:
    """True shortest distances from ``source`` using a feasible potential and Dijkstra."""
    ok, bad = re_feasible(g, feasible_y)
    if not ok:
        raise InfeasibleDual(f"arc {bad} has negative reduced length", bad)
    reduced, _ = dijkstra_with_potentials(g, source, feasible_y, counters)
    ys = feasible_y[source]
    return [UNREACHED if d is UNREACHED else d - ys + feasible_y[v]
            for v, d in enumerate(reduced)]


def _reject_negative_cycle(g: DirectedLengthGraph, counters: OpCounters | None) -> None:
    bf = bellman_ford(g, None, counters)
    if bf.has_negative_cycle:
        raise NegativeCycleError(cycle=bf.negative_cycle)


def apsp_with_prediction(g: DirectedLengthGraph, predicted: Sequence[int],
                         counters: OpCounters | None = None) -> list[list[int | None]]:
    """All-pairs distances: round the prediction, then one Dijkstra per vertex.

    Entry ``[u][v]`` is ``UNREACHED`` when ``v`` cannot be reached from ``u``.
    """
    counters = counters if counters is not None else OpCounters()
    _reject_negative_cycle(g, counters)
    y = round_re_duals(g, predicted, counters)
    return [sssp_with_dual(g, u, y, counters) for u in range(g.n)]


def diameter_with_prediction(g: DirectedLengthGraph, predicted: Sequence[int],
                             counters: OpCounters | None = None) -> int:
    """Largest shortest-path distance over all ordered pairs."""
    table = apsp_with_prediction(g, predicted, counters)
    best = 0
    for u, row in enumerate(table):
        for v, d in enumerate(row):
            if d is UNREACHED:
                raise Disconnected(f"vertex {v} is unreachable from {u}")
            best = max(best, d)
    return best


def feasible_potential(g: DirectedLengthGraph, counters: OpCounters | None = None) -> DualVector:
    """Bellman-Ford potential from a virtual root; a reference feasible dual."""
    bf = bellman_ford(g, None, counters)
    if bf.has_negative_cycle:
        raise NegativeCycleError(cycle=bf.negative_cycle)
    return bf.dual
