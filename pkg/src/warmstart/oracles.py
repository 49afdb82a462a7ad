"""Exhaustive reference solvers for small instances.

These exist only to certify the fast solvers; each refuses inputs beyond a
fixed size budget with :class:`OracleTooLarge`.
"""

from __future__ import annotations

import itertools

from .errors import NegativeCycleError, OracleTooLarge
from .graphcore import UNREACHED, BipartiteInstance, DirectedLengthGraph, FlowNetwork, bellman_ford
from .reductions import DCSInstance

MATCHING_ORACLE_MAX_N = 8
SUBSET_ORACLE_MAX_EDGES = 20
PATH_ORACLE_MAX_N = 9


def brute_force_mwpm(inst: BipartiteInstance) -> int | None:
    """Minimum perfect-matching cost by trying every permutation; ``None`` if there is none."""
    if inst.n_left != inst.n_right:
        return None
    n = inst.n_left
    if n > MATCHING_ORACLE_MAX_N:
        raise OracleTooLarge(f"permutation oracle handles n <= {MATCHING_ORACLE_MAX_N}, got {n}")
    cheapest: dict[tuple[int, int], int] = {}
    for i, j, c in inst.edges:
        if (i, j) not in cheapest or c < cheapest[i, j]:
            cheapest[i, j] = c
    best = None
    for perm in itertools.permutations(range(n)):
        total = 0
        for i, j in enumerate(perm):
            c = cheapest.get((i, j))
            if c is None:
                break
            total += c
        else:
            if best is None or total < best:
                best = total
    return best


def brute_force_bmatching(inst: BipartiteInstance) -> int | None:
    """Minimum perfect b-matching cost by enumerating edge multiplicities."""
    if inst.n > MATCHING_ORACLE_MAX_N:
        raise OracleTooLarge(f"b-matching oracle handles n <= {MATCHING_ORACLE_MAX_N}, got {inst.n}")
    nl = inst.n_left
    edges = inst.edges
    remaining = [inst.b(v) for v in range(inst.n)]
    # Last edge index touching each vertex: after it the vertex must be full.
    last = [-1] * inst.n
    for k, (i, j, _) in enumerate(edges):
        last[i] = last[nl + j] = k
    if any(remaining[v] > 0 and last[v] < 0 for v in range(inst.n)):
        return None
    best = None

    def go(k: int, cost: int) -> None:
        nonlocal best
        if k == len(edges):
            if not any(remaining) and (best is None or cost < best):
                best = cost
            return
        i, j, c = edges[k]
        u, v = i, nl + j
        for x in range(min(remaining[u], remaining[v]), -1, -1):
            remaining[u] -= x
            remaining[v] -= x
            if not ((last[u] == k and remaining[u]) or (last[v] == k and remaining[v])):
                go(k + 1, cost + x * c)
            remaining[u] += x
            remaining[v] += x

    go(0, 0)
    return best


def brute_force_dcs(dcs: DCSInstance) -> int | None:
    """Best weight of a complete degree-constrained subgraph, by subset enumeration."""
    m = len(dcs.edges)
    if m > SUBSET_ORACLE_MAX_EDGES:
        raise OracleTooLarge(f"subset oracle handles m <= {SUBSET_ORACLE_MAX_EDGES}, got {m}")
    nl = dcs.n_left
    best = None
    for mask in range(1 << m):
        deg = [0] * (nl + dcs.n_right)
        weight = 0
        for k, (i, j, w) in enumerate(dcs.edges):
            if mask >> k & 1:
                deg[i] += 1
                deg[nl + j] += 1
                weight += w
        if tuple(deg) == dcs.upper:
            if best is None or (weight > best if dcs.maximize else weight < best):
                best = weight
    return best


def brute_force_01flow(net: FlowNetwork, value: int) -> int | None:
    """Minimum cost of a 0-1 flow with ``value`` units into ``t``, by subset enumeration."""
    m = net.m
    if m > SUBSET_ORACLE_MAX_EDGES:
        raise OracleTooLarge(f"subset oracle handles m <= {SUBSET_ORACLE_MAX_EDGES}, got {m}")
    best = None
    for mask in range(1 << m):
        excess = [0] * net.n
        cost = 0
        for k, (u, v, cap, c) in enumerate(net.arcs):
            if mask >> k & 1:
                if cap < 1:
                    break
                excess[u] -= 1
                excess[v] += 1
                cost += c
        else:
            if excess[net.t] != value:
                continue
            if any(excess[v] for v in range(net.n) if v not in (net.s, net.t)):
                continue
            if best is None or cost < best:
                best = cost
    return best


def bellman_ford_table(g: DirectedLengthGraph) -> list[list[int | None]]:
    """All-pairs distances from one Bellman-Ford run per source."""
    rows = []
    for u in range(g.n):
        bf = bellman_ford(g, u)
        if bf.has_negative_cycle:
            raise NegativeCycleError(cycle=bf.negative_cycle)
        rows.append(list(bf.distances))
    whole = bellman_ford(g)
    if whole.has_negative_cycle:
        raise NegativeCycleError(cycle=whole.negative_cycle)
    return rows


def simple_path_distance(g: DirectedLengthGraph, source: int, target: int) -> int | None:
    """Shortest simple-path length by DFS over all simple paths."""
    if g.n > PATH_ORACLE_MAX_N:
        raise OracleTooLarge(f"path oracle handles n <= {PATH_ORACLE_MAX_N}, got {g.n}")
    if source == target:
        return 0
    out = g.out_arcs
    best = UNREACHED
    on_path = [False] * g.n

    def go(u: int, length: int) -> None:
        nonlocal best
        if u == target:
            if best is UNREACHED or length < best:
                best = length
            return
        on_path[u] = True
        for k in out[u]:
            _, v, w = g.arcs[k]
            if not on_path[v]:
                go(v, length + w)
        on_path[u] = False

    go(source, 0)
    return best
