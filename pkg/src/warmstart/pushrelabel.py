"""Two-stage highest-label push-relabel max flow with learned-preflow warm starts.

Stage one runs push/relabel with heights capped at ``n`` until no vertex
below the cap has excess; the flow into the sink is then maximum. Stage two
cancels flow cycles and returns the leftover excess towards the source in
reverse topological order, giving a feasible flow of the same value.

A warm start is either a predicted preflow (repaired by :func:`fix_preflow`
and labelled by :func:`shortest_path_labeling`) or an explicit
``(FlowState, heights)`` pair.
"""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

from .errors import InvalidWarmLabeling, InvariantViolation
from .graphcore import FlowNetwork, FlowState, OpCounters, ResidualGraph


@dataclass
class PreflowPrediction:
    """Predicted per-arc flow; may exceed the capacities of the current network."""

    flow: list[int]

    def __post_init__(self) -> None:
        if any(f < 0 for f in self.flow):
            raise ValueError("predicted flow must be non-negative")


@dataclass
class MaxFlowResult:
    flow: FlowState
    source_side: set[int]
    counters: OpCounters = field(default_factory=OpCounters)
    initial_heights: list[int] | None = None
    stage_one_value: int = 0

    @property
    def value(self) -> int:
        return self.flow.value


def _as_flow_list(flow: FlowState | PreflowPrediction | Sequence[int]) -> list[int]:
    if isinstance(flow, (FlowState, PreflowPrediction)):
        return list(flow.flow)
    return list(flow)


def _find_support_cycle(net: FlowNetwork, flow: Sequence[int]) -> list[int] | None:
    out: list[list[int]] = [[] for _ in range(net.n)]
    for k, (u, _, _, _) in enumerate(net.arcs):
        if flow[k] > 0:
            out[u].append(k)
    color = [0] * net.n  # 0 new, 1 on stack, 2 done
    via: list[int | None] = [None] * net.n
    for root in range(net.n):
        if color[root]:
            continue
        color[root] = 1
        work = [(root, 0)]
        while work:
            u, pos = work[-1]
            if pos == len(out[u]):
                color[u] = 2
                work.pop()
                continue
            work[-1] = (u, pos + 1)
            k = out[u][pos]
            v = net.arcs[k][1]
            if color[v] == 0:
                color[v] = 1
                via[v] = k
                work.append((v, 0))
            elif color[v] == 1:
                cycle = [k]
                x = u
                while x != v:
                    cycle.append(via[x])
                    x = net.arcs[via[x]][0]
                cycle.reverse()
                return cycle
    return None


def make_acyclic(net: FlowNetwork, flow: FlowState | PreflowPrediction | Sequence[int]) -> FlowState:
    """Cancel flow around cycles until the support graph is a DAG.

    Each found cycle loses its minimum arc flow on every arc, so vertex
    excesses are unchanged. Capacities are not consulted, which lets the
    same routine clean raw predictions.
    """
    f = _as_flow_list(flow)
    while True:
        cycle = _find_support_cycle(net, f)
        if cycle is None:
            return FlowState(net, f)
        delta = min(f[k] for k in cycle)
        for k in cycle:
            f[k] -= delta


def _topological_order(net: FlowNetwork, flow: Sequence[int]) -> list[int]:
    indeg = [0] * net.n
    out: list[list[int]] = [[] for _ in range(net.n)]
    for k, (u, v, _, _) in enumerate(net.arcs):
        if flow[k] > 0:
            out[u].append(k)
            indeg[v] += 1
    heap = [v for v in range(net.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for k in out[u]:
            v = net.arcs[k][1]
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) != net.n:
        raise InvariantViolation("flow support is not acyclic")
    return order


def fix_preflow(net: FlowNetwork, pred: PreflowPrediction | FlowState | Sequence[int]) -> FlowState:
    """Repair a predicted preflow so it is valid on ``net``.

    After removing flow cycles, vertices are visited in topological order of
    the flow support. Each vertex first clips over-capacity outgoing arcs,
    then, if it now sends more than it receives, trims its outgoing arcs in
    id order until the two are equal. Finally every arc leaving ``s`` is
    saturated and arcs entering ``s`` are emptied, as in a cold start.
    """
    f = make_acyclic(net, pred).flow
    if len(f) != net.m:
        raise ValueError(f"prediction has {len(f)} arcs, network has {net.m}")
    out: list[list[int]] = [[] for _ in range(net.n)]
    inflow = [0] * net.n
    for k, (u, v, _, _) in enumerate(net.arcs):
        out[u].append(k)
        inflow[v] += f[k]
    for u in _topological_order(net, f):
        for k in out[u]:
            cap = net.arcs[k][2]
            if f[k] > cap:
                inflow[net.arcs[k][1]] -= f[k] - cap
                f[k] = cap
        if u == net.s:
            continue
        surplus = sum(f[k] for k in out[u]) - inflow[u]
        for k in out[u]:
            if surplus <= 0:
                break
            cut = min(f[k], surplus)
            f[k] -= cut
            inflow[net.arcs[k][1]] -= cut
            surplus -= cut
    for k, (u, v, cap, _) in enumerate(net.arcs):
        if u == net.s:
            f[k] = cap
        elif v == net.s:
            f[k] = 0
    return FlowState(net, f)


def _residual_with_flow(net: FlowNetwork, flow: Sequence[int]) -> ResidualGraph:
    res = net.residual()
    for k, f in enumerate(flow):
        if f:
            res.push(2 * k, f)
    return res


def shortest_path_labeling(net: FlowNetwork, flow: FlowState) -> list[int]:
    """Heights ``min(n, residual hop distance to t)``, with ``h_s = n`` and ``h_t = 0``."""
    n = net.n
    res = _residual_with_flow(net, flow.flow)
    h = [n] * n
    h[net.t] = 0
    queue = deque([net.t])
    while queue:
        v = queue.popleft()
        for a in res.adj[v]:
            # a leaves v; its reverse a^1 enters v from head[a].
            u = res.head[a]
            if res.cap[a ^ 1] > 0 and h[u] == n and u != net.t:
                h[u] = h[v] + 1
                queue.append(u)
    for v in range(n):
        h[v] = min(h[v], n)
    h[net.s] = n
    return h


def labeling_violation(net: FlowNetwork, flow: FlowState, h: Sequence[int]) -> str | None:
    """Reason ``h`` is not a valid labeling for ``flow``, or ``None`` if it is."""
    n = net.n
    if len(h) != n:
        return f"labeling has {len(h)} entries, expected {n}"
    if h[net.s] != n:
        return f"h_s = {h[net.s]}, expected {n}"
    if h[net.t] != 0:
        return f"h_t = {h[net.t]}, expected 0"
    for v, hv in enumerate(h):
        if not 0 <= hv <= n:
            return f"h_{v} = {hv} outside [0, {n}]"
    res = _residual_with_flow(net, flow.flow)
    for a in range(len(res.head)):
        if res.cap[a] > 0:
            u, v = res.tail(a), res.head[a]
            if h[u] > h[v] + 1:
                return f"residual arc {u}->{v} drops from {h[u]} to {h[v]}"
    return None


def relabel_value(u: int, res: ResidualGraph, h: Sequence[int], n: int) -> int:
    """``min(n, 1 + min h_v)`` over residual arcs leaving ``u``; ``n`` if there are none."""
    best = n
    for a in res.adj[u]:
        if res.cap[a] > 0:
            best = min(best, h[res.head[a]] + 1)
    return min(best, n)


def hl_push_relabel(net: FlowNetwork,
                    warm: PreflowPrediction | tuple[FlowState, Sequence[int]] | None = None,
                    counters: OpCounters | None = None,
                    debug: bool = False) -> MaxFlowResult:
    """Maximum s-t flow by highest-label push-relabel.

    ``warm`` may be ``None`` (saturate the source arcs, all other heights 0),
    a :class:`PreflowPrediction`, or an explicit ``(preflow, heights)`` pair
    which must pass :func:`labeling_violation`.

    The returned ``source_side`` is the set of vertices that cannot reach
    ``t`` in the residual graph at the end of stage one; it is a minimum cut.
    """
    n, s, t = net.n, net.s, net.t
    counters = counters if counters is not None else OpCounters()
    counters.reset()

    if warm is None:
        flow = [cap if u == s else 0 for u, _, cap, _ in net.arcs]
        start = FlowState(net, flow)
        h = [0] * n
        h[s] = n
    elif isinstance(warm, PreflowPrediction):
        start = fix_preflow(net, warm)
        h = shortest_path_labeling(net, start)
    else:
        start, h = warm
        start = FlowState(net, list(start.flow))
        h = list(h)
        if not start.is_preflow():
            raise ValueError("warm flow is not a valid preflow")
        reason = labeling_violation(net, start, h)
        if reason is not None:
            raise InvalidWarmLabeling(reason)
    initial_heights = list(h)

    res = _residual_with_flow(net, start.flow)
    excess = start.excesses()

    buckets: list[set[int]] = [set() for _ in range(n + 1)]
    for v in range(n):
        if v not in (s, t) and excess[v] > 0 and h[v] < n:
            buckets[h[v]].add(v)
    cursor = n - 1

    def check(stage: str) -> None:
        state = FlowState(net, [res.flow(2 * k) for k in range(net.m)])
        if not state.is_preflow():
            raise InvariantViolation(f"preflow broken after {stage}")
        reason = labeling_violation(net, state, h)
        if reason is not None:
            raise InvariantViolation(f"labeling broken after {stage}: {reason}")

    while cursor >= 0:
        bucket = buckets[cursor]
        if not bucket:
            cursor -= 1
            continue
        u = min(bucket)
        pushed = False
        for a in res.adj[u]:
            r = res.cap[a]
            if r > 0:
                v = res.head[a]
                if h[u] == h[v] + 1:
                    amount = min(excess[u], r)
                    res.push(a, amount)
                    excess[u] -= amount
                    excess[v] += amount
                    if amount == r:
                        counters.saturating_pushes += 1
                    else:
                        counters.nonsaturating_pushes += 1
                    if v not in (s, t) and h[v] < n and excess[v] == amount:
                        buckets[h[v]].add(v)
                    if excess[u] == 0:
                        bucket.discard(u)
                    pushed = True
                    break
        if not pushed:
            new_h = relabel_value(u, res, h, n)
            if new_h <= h[u]:
                raise InvariantViolation(f"relabel of {u} did not raise it above {h[u]}")
            bucket.discard(u)
            h[u] = new_h
            counters.relabels += 1
            if new_h < n:
                buckets[new_h].add(u)
                cursor = new_h
        if debug:
            check("relabel" if not pushed else "push")

    stage_one_value = excess[t]

    # Vertices that can still reach t form the sink side of a minimum cut.
    reaches_t = [False] * n
    reaches_t[t] = True
    queue = deque([t])
    while queue:
        v = queue.popleft()
        for a in res.adj[v]:
            u = res.head[a]
            if res.cap[a ^ 1] > 0 and not reaches_t[u]:
                reaches_t[u] = True
                queue.append(u)
    source_side = {v for v in range(n) if not reaches_t[v]}

    flow = make_acyclic(net, [res.flow(2 * k) for k in range(net.m)]).flow
    incoming: list[list[int]] = [[] for _ in range(n)]
    for k, (_, v, _, _) in enumerate(net.arcs):
        incoming[v].append(k)
    excess = FlowState(net, flow).excesses()
    for v in reversed(_topological_order(net, flow)):
        if v in (s, t):
            continue
        for k in incoming[v]:
            if excess[v] == 0:
                break
            back = min(flow[k], excess[v])
            if back:
                flow[k] -= back
                excess[v] -= back
                excess[net.arcs[k][0]] += back
    final = FlowState(net, flow)
    if final.value != stage_one_value or not final.is_feasible_flow():
        raise InvariantViolation("stage two changed the flow value or left excess behind")
    return MaxFlowResult(final, source_side, counters, initial_heights, stage_one_value)
