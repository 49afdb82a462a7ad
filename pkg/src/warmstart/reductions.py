"""Reductions onto warm-started bipartite matching, with solution pull-back.

Each ``reduce_*`` function builds a target instance and a
:class:`ReductionArtifact` that knows how to turn a target solution back
into a source solution. :func:`run_reduction_pipeline` chains
reduce -> predict -> repair -> solve -> pull back.

Maximum-weight objectives are handled by the min-cost solver through the
cost ``K - w`` with ``K = max|w| + 1``. Every perfect matching of a target
has the same number of edges, so the offset does not change which one is
optimal.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    InfeasibleBounds,
    NegativeCycleError,
    NoCompleteDCS,
    NoFlowOfValueV,
    NoPerfectMatching,
)
from .graphcore import (
    BipartiteInstance,
    DirectedLengthGraph,
    DualVector,
    FlowNetwork,
    FlowState,
    OpCounters,
)
from .matching import MatchingResult, repair_matching_duals, solve_mwpm
from .spaths import sssp_with_dual


@dataclass
class ReductionArtifact:
    """Target instance plus what is needed to map its solution back.

    ``provenance[k]`` names the source element that created target edge
    ``k``, as a ``(kind, id)`` pair such as ``("arc", 3)`` or
    ``("vertex", 0)``.
    """

    target: BipartiteInstance
    provenance: list[tuple[str, int]]
    pull_back: Callable[[MatchingResult], Any]
    offset: int = 0
    meta: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Shortest paths -> matching
# ---------------------------------------------------------------------------

def reduce_sp_to_matching(g: DirectedLengthGraph) -> ReductionArtifact:
    """Bipartite graph H with copies ``u1`` (left) and ``u2`` (right) of every vertex.

    Arc ``(u, v)`` becomes edge ``(u1, v2)`` of weight ``-l(u, v)`` and each
    vertex adds ``(u1, u2)`` of weight 0, so H has ``m + n`` edges. A
    maximum-weight perfect matching of H is positive exactly when ``g``
    has a negative cycle. Otherwise the pull-back returns the feasible
    potential ``pi_u = K - y_{u1}`` read off the optimal min-cost dual.
    """
    n = g.n
    weights = [-length for _, _, length in g.arcs]
    k_off = max((abs(w) for w in weights), default=0) + 1
    edges = [(u, v, k_off - w) for (u, v, _), w in zip(g.arcs, weights)]
    edges += [(u, u, k_off) for u in range(n)]
    provenance = [("arc", k) for k in range(g.m)] + [("vertex", u) for u in range(n)]
    target = BipartiteInstance(n, n, edges, allow_parallel=True)

    def pull_back(result: MatchingResult) -> DualVector:
        weight = n * k_off - result.total_cost
        if weight > 0:
            raise NegativeCycleError(f"matching weight {weight} > 0")
        y = result.final_duals
        return [k_off - y[u] for u in range(n)]

    return ReductionArtifact(target, provenance, pull_back, k_off)


def max_weight_of(artifact: ReductionArtifact, result: MatchingResult) -> int:
    """Weight of the target matching in the original max-weight units."""
    return len(result.matched_edges) * artifact.offset - result.total_cost


def detect_negative_cycle_via_matching(g: DirectedLengthGraph) -> bool:
    """True iff the max-weight perfect matching of the reduced graph is positive."""
    art = reduce_sp_to_matching(g)
    result = solve_mwpm(art.target, [0] * art.target.n)
    return max_weight_of(art, result) > 0


# ---------------------------------------------------------------------------
# Degree-constrained subgraph -> matching
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DCSInstance:
    """Bipartite multigraph with signed edge weights and per-vertex degree targets.

    A complete DCS picks edges so that vertex ``v`` has degree exactly
    ``upper[v]`` (flattened ids as in :class:`BipartiteInstance`).
    """

    n_left: int
    n_right: int
    edges: tuple[tuple[int, int, int], ...]
    upper: tuple[int, ...]
    maximize: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "upper", tuple(self.upper))
        if len(self.upper) != self.n_left + self.n_right:
            raise ValueError("upper must have one entry per vertex")
        for k, (i, j, _) in enumerate(self.edges):
            if not (0 <= i < self.n_left and 0 <= j < self.n_right):
                raise ValueError(f"edge {k} endpoint out of range")

    @classmethod
    def from_bipartite(cls, inst: BipartiteInstance, upper: Sequence[int],
                       maximize: bool = False) -> DCSInstance:
        return cls(inst.n_left, inst.n_right, inst.edges, tuple(upper), maximize)

    def degrees(self) -> list[int]:
        deg = [0] * (self.n_left + self.n_right)
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[self.n_left + j] += 1
        return deg


def reduce_dcs_to_matching(dcs: DCSInstance) -> ReductionArtifact:
    """Gadget reduction of complete DCS to perfect matching.

    Vertex ``v`` of degree ``d`` gets ``d`` external nodes (one per incident
    edge, assigned in edge-id order) on its own side and ``d - upper[v]``
    internal nodes on the other side, joined completely at weight 0. Each
    source edge joins the two matching external nodes. Matching an internal
    node "uses up" an external one, so exactly ``upper[v]`` externals of
    ``v`` are matched across, which is the DCS. The pull-back returns the
    chosen source edge ids.
    """
    nl, nr = dcs.n_left, dcs.n_right
    deg = dcs.degrees()
    delta = []
    for v, (d, u) in enumerate(zip(deg, dcs.upper)):
        if u < 0 or u > d:
            raise InfeasibleBounds(f"vertex {v}: bound {u} outside [0, {d}]")
        delta.append(d - u)

    # External nodes of left vertices and internal nodes of right vertices are on the target's left.
    n_tl = n_tr = 0
    ext_of_edge_left: list[int] = []
    ext_of_edge_right: list[int] = []
    ext_nodes: list[list[int]] = [[] for _ in range(nl + nr)]
    for k, (i, j, _) in enumerate(dcs.edges):
        ext_of_edge_left.append(n_tl)
        ext_nodes[i].append(n_tl)
        n_tl += 1
    for k, (i, j, _) in enumerate(dcs.edges):
        ext_of_edge_right.append(n_tr)
        ext_nodes[nl + j].append(n_tr)
        n_tr += 1
    int_nodes: list[list[int]] = [[] for _ in range(nl + nr)]
    for v in range(nl + nr):
        for _ in range(delta[v]):
            if v < nl:
                int_nodes[v].append(n_tr)
                n_tr += 1
            else:
                int_nodes[v].append(n_tl)
                n_tl += 1

    signed = [(-w if dcs.maximize else w) for _, _, w in dcs.edges]
    k_off = max((abs(w) for w in signed), default=0) + 1
    edges: list[tuple[int, int, int]] = []
    provenance: list[tuple[str, int]] = []
    for k, w in enumerate(signed):
        edges.append((ext_of_edge_left[k], ext_of_edge_right[k], k_off + w))
        provenance.append(("edge", k))
    for v in range(nl + nr):
        for x in ext_nodes[v]:
            for y in int_nodes[v]:
                edges.append((x, y, k_off) if v < nl else (y, x, k_off))
                provenance.append(("vertex", v))
    target = BipartiteInstance(n_tl, n_tr, edges)
    m = len(dcs.edges)

    def pull_back(result: MatchingResult) -> list[int]:
        return sorted(k for k in result.matched_edges if k < m)

    return ReductionArtifact(target, provenance, pull_back, k_off,
                             meta={"n_source_edges": m})


def solve_dcs(dcs: DCSInstance, predicted: Sequence[int] | None = None,
              counters: OpCounters | None = None) -> list[int]:
    """Optimal complete DCS (edge ids) through the matching reduction."""
    art = reduce_dcs_to_matching(dcs)
    if art.target.n_left != art.target.n_right:
        raise NoCompleteDCS("degree targets of the two sides do not balance")
    y = repair_matching_duals(art.target, predicted if predicted is not None
                              else [0] * art.target.n)
    try:
        result = solve_mwpm(art.target, y, counters)
    except NoPerfectMatching as exc:
        raise NoCompleteDCS(str(exc)) from exc
    return art.pull_back(result)


# ---------------------------------------------------------------------------
# Min-cost 0-1 flow -> DCS
# ---------------------------------------------------------------------------

@dataclass
class FlowReduction:
    """Output of :func:`reduce_01flow_to_dcs`: a DCS and how to read a flow from it."""

    dcs: DCSInstance
    provenance: list[tuple[str, int]]
    pull_back: Callable[[Sequence[int]], FlowState]


def reduce_01flow_to_dcs(net: FlowNetwork, value: int) -> FlowReduction:
    """DCS whose optimal complete subgraphs are the min-cost flows of the given value.

    Vertex ``i`` becomes ``i1`` (left, counts leaving flow) and ``i2``
    (right, counts entering flow). ``mindegree(i)`` parallel zero-weight
    edges ``(i1, i2)`` absorb unused capacity, and arc ``(j, k)`` becomes
    edge ``(j1, k2)`` of weight ``-cost``. Degree targets are
    ``mindegree(i)`` on both copies, except that ``s1`` and ``t2`` get
    ``+value`` so the source emits and the sink absorbs ``value`` units.
    """
    n = net.n
    for k, (_, _, cap, _) in enumerate(net.arcs):
        if cap != 1:
            raise ValueError(f"arc {k} has capacity {cap}; 0-1 flow needs unit capacities")
    outdeg = [0] * n
    indeg = [0] * n
    for u, v, _, _ in net.arcs:
        outdeg[u] += 1
        indeg[v] += 1
    if value < 0 or value > min(outdeg[net.s], indeg[net.t]):
        raise NoFlowOfValueV(f"value {value} outside [0, {min(outdeg[net.s], indeg[net.t])}]")
    mindeg = [min(a, b) for a, b in zip(indeg, outdeg)]

    edges = [(u, v, -cost) for u, v, _, cost in net.arcs]
    provenance = [("arc", k) for k in range(net.m)]
    for i in range(n):
        edges += [(i, i, 0)] * mindeg[i]
        provenance += [("vertex", i)] * mindeg[i]
    upper = list(mindeg) + list(mindeg)
    upper[net.s] += value
    upper[n + net.t] += value
    dcs = DCSInstance(n, n, edges, upper, maximize=True)
    m = net.m

    def pull_back(chosen: Sequence[int]) -> FlowState:
        flow = [0] * m
        for k in chosen:
            if k < m:
                flow[k] = 1
        return FlowState(net, flow)

    return FlowReduction(dcs, provenance, pull_back)


def solve_01flow(net: FlowNetwork, value: int, predicted: Sequence[int] | None = None,
                 counters: OpCounters | None = None) -> FlowState:
    """Minimum-cost 0-1 flow of the given value, via DCS and matching."""
    red = reduce_01flow_to_dcs(net, value)
    try:
        chosen = solve_dcs(red.dcs, predicted, counters)
    except (NoCompleteDCS, InfeasibleBounds) as exc:
        raise NoFlowOfValueV(str(exc)) from exc
    return red.pull_back(chosen)


# ---------------------------------------------------------------------------
# Generic pipeline
# ---------------------------------------------------------------------------

@dataclass
class PipelineResult:
    solution: Any
    counters: OpCounters
    artifact: ReductionArtifact
    target_result: MatchingResult


def run_reduction_pipeline(source: Any,
                           reduce: Callable[[Any], ReductionArtifact],
                           predictor: Callable[[BipartiteInstance], Sequence[int]] | None = None,
                           solver: Callable[..., MatchingResult] = solve_mwpm,
                           ) -> PipelineResult:
    """Reduce, predict target duals, repair them, solve the target, and pull back.

    ``predictor`` maps the target instance to a dual vector; ``None`` means the
    zero dual. Counters come straight from the inner solver.
    """
    art = reduce(source)
    target = art.target
    predicted = predictor(target) if predictor is not None else [0] * target.n
    y = repair_matching_duals(target, predicted)
    counters = OpCounters()
    result = solver(target, y, counters)
    return PipelineResult(art.pull_back(result), counters, art, result)


def shortest_paths_via_matching(g: DirectedLengthGraph, source: int,
                                predictor: Callable[[BipartiteInstance], Sequence[int]] | None = None,
                                ) -> tuple[list[int | None], PipelineResult]:
    """Distances from ``source`` using a potential recovered through the matching reduction."""
    res = run_reduction_pipeline(g, reduce_sp_to_matching, predictor)
    return sssp_with_dual(g, source, res.solution), res
