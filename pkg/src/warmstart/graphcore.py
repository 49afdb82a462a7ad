"""Graph types, residual networks and the classical subroutines shared by the solvers.

Vertex ids are dense and 0-based. A bipartite instance with ``n_left`` left
and ``n_right`` right vertices uses the flattened ids ``0..n_left-1`` for the
left side and ``n_left..n_left+n_right-1`` for the right side wherever a single
per-vertex vector is needed (duals, demands).

All weights are Python ints. Constructors reject magnitudes above 2**31 so
that sums over n*C stay well inside 64-bit range.
"""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, fields
from functools import cached_property

from .errors import InvariantViolation

MAX_ABS_WEIGHT = 2**31

#: Marks a vertex with no path from the source. Never a finite number.
UNREACHED = None

DualVector = list[int]


def _check_weight(value: int, what: str) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{what} must be an int, got {type(value).__name__}")
    if abs(value) > MAX_ABS_WEIGHT:
        raise ValueError(f"|{what}| = {abs(value)} exceeds 2**31")


@dataclass(frozen=True)
class BipartiteInstance:
    """Weighted bipartite (multi)graph with optional per-vertex demands.

    ``edges`` holds ``(left, right, cost)`` with ``right`` in ``0..n_right-1``.
    The edge id is the position in ``edges``. ``demands`` is indexed by
    flattened vertex id; ``None`` means every demand is 1.
    """

    n_left: int
    n_right: int
    edges: tuple[tuple[int, int, int], ...]
    demands: tuple[int, ...] | None = None
    allow_parallel: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if self.demands is not None:
            object.__setattr__(self, "demands", tuple(self.demands))
        if self.n_left < 0 or self.n_right < 0:
            raise ValueError("vertex counts must be non-negative")
        seen = set()
        for k, (i, j, c) in enumerate(self.edges):
            if not (0 <= i < self.n_left and 0 <= j < self.n_right):
                raise ValueError(f"edge {k} endpoint out of range: {(i, j)}")
            _check_weight(c, f"cost of edge {k}")
            if c < 0:
                raise ValueError(f"edge {k} has negative cost {c}")
            if (i, j) in seen and self.demands is None and not self.allow_parallel:
                raise ValueError(f"parallel edge {(i, j)} requires demands or allow_parallel")
            seen.add((i, j))
        if self.demands is not None:
            if len(self.demands) != self.n:
                raise ValueError("demands must have one entry per vertex")
            if any(b < 0 for b in self.demands):
                raise ValueError("demands must be non-negative")

    @property
    def n(self) -> int:
        return self.n_left + self.n_right

    @property
    def m(self) -> int:
        return len(self.edges)

    def b(self, v: int) -> int:
        return 1 if self.demands is None else self.demands[v]

    def right_id(self, j: int) -> int:
        """Flattened id of right vertex ``j``."""
        return self.n_left + j

    @cached_property
    def max_cost(self) -> int:
        return max((c for _, _, c in self.edges), default=0)


@dataclass(frozen=True)
class DirectedLengthGraph:
    """Directed multigraph with signed integer arc lengths. Self-loops are rejected."""

    n: int
    arcs: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(tuple(a) for a in self.arcs))
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        for k, (u, v, length) in enumerate(self.arcs):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc {k} endpoint out of range: {(u, v)}")
            if u == v:
                raise ValueError(f"arc {k} is a self-loop at {u}")
            _check_weight(length, f"length of arc {k}")

    @property
    def m(self) -> int:
        return len(self.arcs)

    @cached_property
    def out_arcs(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for k, (u, _, _) in enumerate(self.arcs):
            out[u].append(k)
        return out

    def reduced_length(self, k: int, y: Sequence[int]) -> int:
        u, v, length = self.arcs[k]
        return length + y[u] - y[v]


@dataclass(frozen=True)
class FlowNetwork:
    """Capacitated directed network with source ``s`` and sink ``t``.

    Arcs are ``(u, v, capacity, cost)``; a 3-tuple gets cost 0.
    """

    n: int
    arcs: tuple[tuple[int, int, int, int], ...]
    s: int
    t: int

    def __post_init__(self) -> None:
        arcs = []
        for a in self.arcs:
            a = tuple(a)
            if len(a) == 3:
                a = a + (0,)
            arcs.append(a)
        object.__setattr__(self, "arcs", tuple(arcs))
        if self.s == self.t:
            raise ValueError("source and sink must differ")
        if not (0 <= self.s < self.n and 0 <= self.t < self.n):
            raise ValueError("source/sink out of range")
        for k, (u, v, cap, cost) in enumerate(self.arcs):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc {k} endpoint out of range: {(u, v)}")
            _check_weight(cap, f"capacity of arc {k}")
            _check_weight(cost, f"cost of arc {k}")
            if cap < 0:
                raise ValueError(f"arc {k} has negative capacity")

    @property
    def m(self) -> int:
        return len(self.arcs)

    def residual(self) -> ResidualGraph:
        """Fresh residual graph carrying zero flow; arc ``k`` maps to residual arc ``2k``."""
        res = ResidualGraph(self.n)
        for u, v, cap, _ in self.arcs:
            res.add_arc(u, v, cap)
        return res


@dataclass
class FlowState:
    """Per-arc flow on a :class:`FlowNetwork`."""

    network: FlowNetwork
    flow: list[int]

    @classmethod
    def zero(cls, network: FlowNetwork) -> FlowState:
        return cls(network, [0] * network.m)

    def copy(self) -> FlowState:
        return FlowState(self.network, list(self.flow))

    def excesses(self) -> list[int]:
        ex = [0] * self.network.n
        for (u, v, _, _), f in zip(self.network.arcs, self.flow):
            ex[v] += f
            ex[u] -= f
        return ex

    def excess(self, v: int) -> int:
        return self.excesses()[v]

    @property
    def value(self) -> int:
        """Net flow into the sink."""
        return self.excess(self.network.t)

    def respects_capacities(self) -> bool:
        return all(0 <= f <= a[2] for a, f in zip(self.network.arcs, self.flow))

    def is_preflow(self) -> bool:
        """Non-negativity, capacity and weak conservation away from ``s`` and ``t``."""
        if not self.respects_capacities():
            return False
        ex = self.excesses()
        net = self.network
        return all(ex[v] >= 0 for v in range(net.n) if v not in (net.s, net.t))

    def is_feasible_flow(self) -> bool:
        if not self.respects_capacities():
            return False
        ex = self.excesses()
        net = self.network
        return all(ex[v] == 0 for v in range(net.n) if v not in (net.s, net.t))

    def cost(self) -> int:
        return sum(f * a[3] for a, f in zip(self.network.arcs, self.flow))


@dataclass
class OpCounters:
    """Operation counts measured during one solve."""

    while_iterations: int = 0
    dijkstra_calls: int = 0
    ff_augmentations: int = 0
    first_match_size: int = 0
    relabels: int = 0
    saturating_pushes: int = 0
    nonsaturating_pushes: int = 0
    bellman_ford_passes: int = 0
    round_iterations: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class ResidualGraph:
    """Arc-pair residual network.

    Arc ``a`` and its reverse are ``a`` and ``a ^ 1``; forward arcs get even ids.
    For an arc added with zero reverse capacity, the flow it carries equals the
    residual capacity of its reverse.
    """

    def __init__(self, n: int) -> None:
        self.n = n
        self.head: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_vertex(self) -> int:
        self.adj.append([])
        self.n += 1
        return self.n - 1

    def add_arc(self, u: int, v: int, cap: int, rev_cap: int = 0) -> int:
        a = len(self.head)
        self.head += [v, u]
        self.cap += [cap, rev_cap]
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    def tail(self, a: int) -> int:
        return self.head[a ^ 1]

    def flow(self, a: int) -> int:
        """Flow on forward arc ``a`` (assumes it was added with ``rev_cap=0``)."""
        return self.cap[a ^ 1]

    def push(self, a: int, amount: int) -> None:
        self.cap[a] -= amount
        self.cap[a ^ 1] += amount

    def reachable_from(self, source: int,
                       usable: Callable[[int], bool] | None = None) -> list[bool]:
        seen = [False] * self.n
        seen[source] = True
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for a in self.adj[u]:
                if self.cap[a] > 0 and (usable is None or usable(a)):
                    v = self.head[a]
                    if not seen[v]:
                        seen[v] = True
                        queue.append(v)
        return seen


# ---------------------------------------------------------------------------
# Shortest paths
# ---------------------------------------------------------------------------

Adjacency = Sequence[Sequence[tuple[int, int, int]]]


def dijkstra(adj: Adjacency, source: int,
             counters: OpCounters | None = None) -> tuple[list[int | None], list[int | None]]:
    """Dijkstra over ``adj[u] = [(v, weight, arc_id), ...]``.

    Returns ``(dist, parent_arc)``; unreachable vertices get ``UNREACHED``.
    Equal keys pop lowest vertex id first. A negative weight raises
    :class:`InvariantViolation`: callers only ever pass reduced costs that
    must already be non-negative.
    """
    n = len(adj)
    dist: list[int | None] = [UNREACHED] * n
    parent: list[int | None] = [None] * n
    done = [False] * n
    dist[source] = 0
    heap = [(0, source)]
    if counters is not None:
        counters.dijkstra_calls += 1
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w, a in adj[u]:
            if w < 0:
                raise InvariantViolation(f"negative reduced cost {w} on arc {a} ({u}->{v})")
            nd = d + w
            if dist[v] is UNREACHED or nd < dist[v]:
                dist[v] = nd
                parent[v] = a
                heapq.heappush(heap, (nd, v))
    return dist, parent


def dijkstra_with_potentials(g: DirectedLengthGraph, source: int,
                             potentials: Sequence[int] | None = None,
                             counters: OpCounters | None = None,
                             ) -> tuple[list[int | None], list[int | None]]:
    """Shortest distances from ``source`` under reduced lengths ``l(u,v) + y_u - y_v``.

    With ``potentials=None`` the arc lengths themselves are used and must be
    non-negative. Distances are in reduced units; see
    :func:`warmstart.spaths.sssp_with_dual` for true lengths.
    """
    y = potentials if potentials is not None else [0] * g.n
    adj = [[] for _ in range(g.n)]
    for k, (u, v, length) in enumerate(g.arcs):
        adj[u].append((v, length + y[u] - y[v], k))
    return dijkstra(adj, source, counters)


@dataclass
class BellmanFordResult:
    """Outcome of :func:`bellman_ford`.

    Exactly one of ``negative_cycle`` (arc ids, in order) or a usable
    ``distances``/``dual`` pair is meaningful. ``dual[v]`` equals the distance
    for reached vertices and 0 otherwise.
    """

    distances: list[int | None]
    dual: DualVector
    negative_cycle: list[int] | None = None
    passes: int = 0

    @property
    def has_negative_cycle(self) -> bool:
        return self.negative_cycle is not None


def bellman_ford(g: DirectedLengthGraph, source: int | None = None,
                 counters: OpCounters | None = None) -> BellmanFordResult:
    """Bellman-Ford from ``source``.

    ``source=None`` runs from a virtual vertex joined to every vertex by a
    zero-length arc, which reaches everything and yields a feasible potential
    for the whole graph (or a negative cycle anywhere in it).
    """
    n = g.n
    parent: list[int | None] = [None] * n
    if source is None:
        # The implicit first pass over the virtual arcs leaves every distance at 0.
        dist: list[int | None] = [0] * n
    else:
        dist = [UNREACHED] * n
        dist[source] = 0
    rounds = n
    passes = 0
    last_relaxed = None
    for passes in range(1, rounds + 1):
        last_relaxed = None
        for k, (u, v, length) in enumerate(g.arcs):
            du = dist[u]
            if du is UNREACHED:
                continue
            if dist[v] is UNREACHED or du + length < dist[v]:
                dist[v] = du + length
                parent[v] = k
                last_relaxed = v
        if last_relaxed is None:
            break
    if counters is not None:
        counters.bellman_ford_passes += passes

    if last_relaxed is not None and passes == rounds:
        # Still relaxing after |V|-1 rounds over the (possibly virtual) vertex set.
        x = last_relaxed
        for _ in range(n):
            x = g.arcs[parent[x]][0]
        cycle = []
        y = x
        while True:
            k = parent[y]
            cycle.append(k)
            y = g.arcs[k][0]
            if y == x:
                break
        cycle.reverse()
        return BellmanFordResult(dist, [0] * n, cycle, passes)

    dual = [d if d is not UNREACHED else 0 for d in dist]
    return BellmanFordResult(dist, dual, None, passes)


# ---------------------------------------------------------------------------
# Matching and flow
# ---------------------------------------------------------------------------

def hopcroft_karp(n_left: int, n_right: int,
                  edges: Sequence[tuple[int, int]] | Sequence[tuple[int, int, int]],
                  edge_ids: Iterable[int] | None = None) -> list[int]:
    """Maximum-cardinality matching; returns the matched edge ids in ascending order.

    ``edges[k]`` starts with ``(left, right)``. If ``edge_ids`` is given only
    those edges are considered (used for the tight subgraph). Edges are tried
    in id order, so the result is deterministic.
    """
    ids = range(len(edges)) if edge_ids is None else sorted(edge_ids)
    adj: list[list[int]] = [[] for _ in range(n_left)]
    for k in ids:
        adj[edges[k][0]].append(k)

    mate_left: list[int | None] = [None] * n_left   # edge id
    mate_right: list[int | None] = [None] * n_right
    inf = n_left + n_right + 1

    def bfs() -> tuple[list[int], bool]:
        dist = [inf] * n_left
        queue = deque()
        for i in range(n_left):
            if mate_left[i] is None:
                dist[i] = 0
                queue.append(i)
        found = False
        while queue:
            i = queue.popleft()
            for k in adj[i]:
                j = edges[k][1]
                e = mate_right[j]
                if e is None:
                    found = True
                else:
                    i2 = edges[e][0]
                    if dist[i2] == inf:
                        dist[i2] = dist[i] + 1
                        queue.append(i2)
        return dist, found

    def dfs(i: int, dist: list[int]) -> bool:
        for k in adj[i]:
            j = edges[k][1]
            e = mate_right[j]
            if e is None or (dist[edges[e][0]] == dist[i] + 1 and dfs(edges[e][0], dist)):
                mate_left[i] = k
                mate_right[j] = k
                return True
        dist[i] = inf
        return False

    while True:
        dist, found = bfs()
        if not found:
            break
        for i in range(n_left):
            if mate_left[i] is None:
                dfs(i, dist)
    return sorted(k for k in mate_left if k is not None)


def ford_fulkerson(res: ResidualGraph, s: int, t: int,
                   usable: Callable[[int], bool] | None = None,
                   flow_cap: int | None = None,
                   counters: OpCounters | None = None) -> int:
    """Augment ``res`` in place with a maximum s-t flow over usable arcs.

    Augmenting paths come from depth-first search in arc order. Each unit of
    flow pushed adds one to ``counters.ff_augmentations`` (one per path on
    unit-capacity networks). ``flow_cap`` stops early once that much flow
    has been added. Returns the amount added.
    """
    total = 0
    while flow_cap is None or total < flow_cap:
        parent = [-1] * res.n
        parent[s] = -2
        stack = [s]
        while stack and parent[t] == -1:
            u = stack.pop()
            for a in reversed(res.adj[u]):
                if res.cap[a] > 0 and (usable is None or usable(a)):
                    v = res.head[a]
                    if parent[v] == -1:
                        parent[v] = a
                        stack.append(v)
        if parent[t] == -1:
            break
        path = []
        v = t
        while v != s:
            a = parent[v]
            path.append(a)
            v = res.tail(a)
        amount = min(res.cap[a] for a in path)
        if flow_cap is not None:
            amount = min(amount, flow_cap - total)
        for a in path:
            res.push(a, amount)
        total += amount
        if counters is not None:
            counters.ff_augmentations += amount
    return total


def edmonds_karp_oracle(net: FlowNetwork) -> tuple[int, set[int]]:
    """Textbook Edmonds-Karp on an aggregated capacity matrix.

    Verification oracle only. Returns ``(max_flow_value, source_side)`` where
    ``source_side`` is the set of vertices reachable from ``s`` in the final
    residual graph.
    """
    n, s, t = net.n, net.s, net.t
    cap = [dict() for _ in range(n)]
    for u, v, c, _ in net.arcs:
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)
    value = 0
    while True:
        prev = {s: None}
        queue = deque([s])
        while queue and t not in prev:
            u = queue.popleft()
            for v, c in cap[u].items():
                if c > 0 and v not in prev:
                    prev[v] = u
                    queue.append(v)
        if t not in prev:
            return value, set(prev)
        bottleneck = None
        v = t
        while prev[v] is not None:
            u = prev[v]
            bottleneck = cap[u][v] if bottleneck is None else min(bottleneck, cap[u][v])
            v = u
        v = t
        while prev[v] is not None:
            u = prev[v]
            cap[u][v] -= bottleneck
            cap[v][u] += bottleneck
            v = u
        value += bottleneck


def is_matching_feasible(inst: BipartiteInstance, y: Sequence[int]) -> bool:
    return first_matching_violation(inst, y) is None


def first_matching_violation(inst: BipartiteInstance, y: Sequence[int]) -> int | None:
    """Id of the first edge with ``y_i + y_j > c_ij``, or ``None``."""
    nl = inst.n_left
    for k, (i, j, c) in enumerate(inst.edges):
        if y[i] + y[nl + j] > c:
            return k
    return None
