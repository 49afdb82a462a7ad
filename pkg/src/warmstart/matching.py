"""Minimum-weight perfect matching and perfect b-matching from warm-start duals.

Both solvers take a *feasible* dual ``y`` (``y_i + y_j <= c_ij`` on every
edge, indexed by flattened vertex id) and return an optimal primal solution
together with optimal duals. The work done after the first matching/flow
call is bounded by how many dual coordinates differ from an optimal dual;
:class:`~warmstart.graphcore.OpCounters` records the relevant counts.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

from .errors import InfeasibleDual, InvariantViolation, NoPerfectBMatching, NoPerfectMatching
from .graphcore import (
    UNREACHED,
    BipartiteInstance,
    DualVector,
    OpCounters,
    ResidualGraph,
    dijkstra,
    first_matching_violation,
    ford_fulkerson,
    hopcroft_karp,
)


@dataclass
class MatchingResult:
    """Optimal (b-)matching.

    ``matched_edges`` lists edge ids in ascending order; for b-matchings an
    edge id repeats once per unit of multiplicity.
    """

    matched_edges: list[int]
    total_cost: int
    final_duals: DualVector
    counters: OpCounters = field(default_factory=OpCounters)


def repair_matching_duals(inst: BipartiteInstance, predicted: Sequence[int]) -> DualVector:
    """Make a predicted dual feasible by clipping left duals.

    Right duals are kept; each left dual becomes
    ``min(y_i, min_j (c_ij - y_j))`` over its neighbours. Isolated left
    vertices keep their value. Feasible input comes back unchanged.
    """
    if len(predicted) != inst.n:
        raise ValueError(f"dual has length {len(predicted)}, expected {inst.n}")
    y = list(predicted)
    nl = inst.n_left
    for i, j, c in inst.edges:
        slack_bound = c - predicted[nl + j]
        if y[i] > slack_bound:
            y[i] = slack_bound
    return y


def _check_feasible(inst: BipartiteInstance, y: Sequence[int]) -> None:
    if len(y) != inst.n:
        raise ValueError(f"dual has length {len(y)}, expected {inst.n}")
    k = first_matching_violation(inst, y)
    if k is not None:
        i, j, c = inst.edges[k]
        raise InfeasibleDual(
            f"edge {k} ({i}, {j}): y_i + y_j = {y[i] + y[inst.n_left + j]} > cost {c}", k)


def solve_mwpm(inst: BipartiteInstance, feasible_dual: Sequence[int],
               counters: OpCounters | None = None, debug: bool = False) -> MatchingResult:
    """Minimum-cost perfect matching, warm-started from a feasible dual.

    The tight subgraph is matched first with Hopcroft-Karp. The rest of the
    matching is found on the flow network ``s -> L -> R -> t`` by alternating
    a Dijkstra potential update with Ford-Fulkerson over zero-reduced-cost
    residual arcs. With ``debug=True`` reduced-cost non-negativity is checked
    after every potential update and every augmentation.

    Raises InfeasibleDual if the input dual violates an edge and
    NoPerfectMatching if no perfect matching exists.
    """
    if inst.n_left != inst.n_right:
        raise NoPerfectMatching(f"sides differ: {inst.n_left} left, {inst.n_right} right")
    _check_feasible(inst, feasible_dual)
    counters = counters if counters is not None else OpCounters()
    counters.reset()

    n = inst.n_left
    edges = inst.edges
    m = len(edges)
    y = feasible_dual

    tight = [k for k, (i, j, c) in enumerate(edges) if y[i] + y[n + j] == c]
    matched = hopcroft_karp(n, n, edges, tight)
    counters.first_match_size = len(matched)

    # Vertices: left 0..n-1, right n..2n-1, s = 2n, t = 2n+1.
    s, t = 2 * n, 2 * n + 1
    res = ResidualGraph(2 * n + 2)
    for i, j, _ in edges:
        res.add_arc(i, n + j, 1)
    source_arc = [res.add_arc(s, i, 1) for i in range(n)]
    sink_arc = [res.add_arc(n + j, t, 1) for j in range(n)]
    for k in matched:
        i, j, _ = edges[k]
        res.push(2 * k, 1)
        res.push(source_arc[i], 1)
        res.push(sink_arc[j], 1)
    value = len(matched)

    # Potentials; s and t stay at 0 and their arcs have reduced cost 0.
    z = [-y[i] for i in range(n)] + [y[n + j] for j in range(n)] + [0, 0]
    edge_limit = 2 * m

    def reduced(a: int) -> int:
        if a >= edge_limit:
            return 0
        i, j, c = edges[a >> 1]
        r = c + z[i] - z[n + j]
        return r if a % 2 == 0 else -r

    def check_nonnegative(stage: str) -> None:
        for a in range(edge_limit):
            if res.cap[a] > 0 and reduced(a) < 0:
                raise InvariantViolation(f"reduced cost {reduced(a)} < 0 on arc {a} after {stage}")

    if debug:
        check_nonnegative("initialisation")

    while value < n:
        counters.while_iterations += 1
        adj = [[] for _ in range(res.n)]
        for u in range(res.n):
            for a in res.adj[u]:
                if res.cap[a] > 0:
                    adj[u].append((res.head[a], reduced(a), a))
        dist, _ = dijkstra(adj, s, counters)
        bound = dist[t]
        if bound is UNREACHED:
            raise NoPerfectMatching(f"no augmenting path after {value} of {n} matched")
        for u in range(2 * n):
            d = dist[u]
            z[u] += bound if d is UNREACHED or d > bound else d
        if debug:
            check_nonnegative("potential update")

        added = ford_fulkerson(res, s, t, usable=lambda a: reduced(a) == 0, counters=counters)
        if added == 0:
            raise InvariantViolation("zero-cost subgraph admitted no augmenting path")
        value += added
        if debug:
            check_nonnegative("augmentation")

    chosen = [k for k in range(m) if res.flow(2 * k) == 1]
    total = sum(edges[k][2] for k in chosen)
    duals = [-z[i] for i in range(n)] + [z[n + j] for j in range(n)]
    return MatchingResult(chosen, total, duals, counters)


def solve_mwbm(inst: BipartiteInstance, feasible_dual: Sequence[int],
               counters: OpCounters | None = None, debug: bool = False) -> MatchingResult:
    """Minimum-cost perfect b-matching, warm-started from a feasible dual.

    Every vertex ``v`` must be covered exactly ``b_v`` times; an edge may be
    used more than once. Max flow on the tight network is computed first;
    while it falls short, the left vertices ``S`` reachable from ``s`` in the
    residual graph are raised and their tight neighbours lowered by the
    smallest slack leaving ``S``, and the flow is extended.

    ``counters.first_match_size`` is the first flow value and
    ``counters.ff_augmentations`` the flow added inside the loop.
    """
    if len(feasible_dual) != inst.n:
        raise ValueError(f"dual has length {len(feasible_dual)}, expected {inst.n}")
    nl, nr = inst.n_left, inst.n_right
    b = [inst.b(v) for v in range(inst.n)]
    need = sum(b[:nl])
    if need != sum(b[nl:]):
        raise NoPerfectBMatching(f"left demand {need} != right demand {sum(b[nl:])}")
    _check_feasible(inst, feasible_dual)
    counters = counters if counters is not None else OpCounters()
    counters.reset()

    edges = inst.edges
    m = len(edges)
    y = list(feasible_dual)
    big = max(need, 1)

    s, t = inst.n, inst.n + 1
    res = ResidualGraph(inst.n + 2)
    for i, j, _ in edges:
        res.add_arc(i, nl + j, big)
    for i in range(nl):
        res.add_arc(s, i, b[i])
    for j in range(nr):
        res.add_arc(nl + j, t, b[nl + j])

    tight = [False] * m

    def refresh_tight() -> None:
        for k, (i, j, c) in enumerate(edges):
            tight[k] = y[i] + y[nl + j] == c
            if debug and not tight[k] and res.flow(2 * k) > 0:
                raise InvariantViolation(f"edge {k} carries flow but is not tight")

    def usable(a: int) -> bool:
        return a >= 2 * m or tight[a >> 1]

    refresh_tight()
    value = ford_fulkerson(res, s, t, usable=usable)
    counters.first_match_size = value

    while value < need:
        counters.while_iterations += 1
        seen = res.reachable_from(s, usable)
        eps = None
        for k, (i, j, c) in enumerate(edges):
            if seen[i] and not seen[nl + j]:
                slack = c - y[i] - y[nl + j]
                if eps is None or slack < eps:
                    eps = slack
        if eps is None:
            raise NoPerfectBMatching(f"Hall condition fails with flow {value} of {need}")
        for v in range(inst.n):
            if seen[v]:
                y[v] += eps if v < nl else -eps
        refresh_tight()
        value += ford_fulkerson(res, s, t, usable=usable, counters=counters)

    chosen = []
    for k in range(m):
        chosen.extend([k] * res.flow(2 * k))
    total = sum(edges[k][2] for k in chosen)
    return MatchingResult(chosen, total, y, counters)


def optimal_matching_dual(inst: BipartiteInstance) -> DualVector:
    """Optimal dual of a perfect-matching instance: the final potentials of a cold solve."""
    return solve_mwpm(inst, [0] * inst.n).final_duals


def optimal_bmatching_dual(inst: BipartiteInstance) -> DualVector:
    return solve_mwbm(inst, [0] * inst.n).final_duals
