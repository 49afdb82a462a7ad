"""Acceptance gate: eleven end-to-end criteria, each checked against an independent oracle.

Run with pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time
from collections.abc import Callable

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from helpers import (  # noqa: E402
    plant_negative_cycle,
    random_bipartite,
    random_digraph,
    random_digraph_without_negative_cycle,
    random_feasible_dual,
    random_network,
)
from warmstart.bench import ExperimentConfig, rows_to_csv, run_experiment, sigma_sweep  # noqa: E402
from warmstart.errors import (  # noqa: E402
    Disconnected,
    NegativeCycleError,
    NoCompleteDCS,
    NoFlowOfValueV,
    NoPerfectBMatching,
    NoPerfectMatching,
)
from warmstart.graphcore import (  # noqa: E402
    UNREACHED,
    BipartiteInstance,
    FlowNetwork,
    FlowState,
    OpCounters,
    bellman_ford,
    edmonds_karp_oracle,
)
from warmstart.matching import (  # noqa: E402
    optimal_matching_dual,
    repair_matching_duals,
    solve_mwbm,
    solve_mwpm,
)
from warmstart.oracles import (  # noqa: E402
    bellman_ford_table,
    brute_force_01flow,
    brute_force_bmatching,
    brute_force_dcs,
    brute_force_mwpm,
)
from warmstart.predict import batch_median_predictor, measure_error  # noqa: E402
from warmstart.pushrelabel import (  # noqa: E402
    PreflowPrediction,
    fix_preflow,
    hl_push_relabel,
    shortest_path_labeling,
)
from warmstart.reductions import (  # noqa: E402
    DCSInstance,
    detect_negative_cycle_via_matching,
    reduce_sp_to_matching,
    solve_01flow,
    solve_dcs,
)
from warmstart.spaths import (  # noqa: E402
    apsp_with_prediction,
    diameter_with_prediction,
    re_feasible,
    round_re_duals,
)

RESULTS: dict[int, tuple[str, bool, str]] = {}


def record(number: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[number] = (title, ok, detail)
    print(f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {title}: {detail}")


# 1 ---------------------------------------------------------------------------

def check_matching_optimality() -> tuple[bool, str]:
    start = time.perf_counter()
    bad, solvable = [], 0
    for seed in range(300):
        rng = random.Random(seed)
        inst = random_bipartite(rng, rng.randint(1, 7), density=rng.choice([0.6, 1.0]))
        y = random_feasible_dual(rng, inst)
        expected = brute_force_mwpm(inst)
        try:
            got = solve_mwpm(inst, y).total_cost
        except NoPerfectMatching:
            got = None
        solvable += expected is not None
        if got != expected:
            bad.append(seed)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    return ok, f"{300 - len(bad)}/300 agree with permutation brute force ({solvable} solvable), {elapsed:.2f} s"


# 2 ---------------------------------------------------------------------------

def check_matching_counter_bounds() -> tuple[bool, str]:
    violations, runs, zero_k_iterations = [], 0, []
    rng = random.Random(2024)
    while runs < 200:
        n = rng.randint(1, 7)
        inst = random_bipartite(rng, n)
        y_opt = optimal_matching_dual(inst)
        for k in range(n + 1):
            if runs == 200:
                break
            runs += 1
            pred = list(y_opt)
            for v in rng.sample(range(inst.n), k):
                pred[v] += rng.choice([-1, 1]) * rng.randint(1, 6)
            y = repair_matching_duals(inst, pred)
            l0 = measure_error(y, y_opt).l0
            c = solve_mwpm(inst, y).counters
            if k == 0:
                zero_k_iterations.append(c.while_iterations)
            if c.first_match_size < n - l0 or c.while_iterations > l0 or c.ff_augmentations > l0:
                violations.append((n, k, l0, c.first_match_size, c.while_iterations, c.ff_augmentations))
    zero_ok = all(w == 0 for w in zero_k_iterations)
    return (not violations and zero_ok,
            f"{len(violations)} violations over {runs} planted runs; "
            f"k=0 while_iterations all zero: {zero_ok} ({len(zero_k_iterations)} runs)")


# 3 ---------------------------------------------------------------------------

def random_bmatching(rng: random.Random) -> BipartiteInstance:
    nl, nr = rng.randint(1, 4), rng.randint(1, 4)
    edges = [(i, j, rng.randint(0, 20)) for i in range(nl) for j in range(nr) if rng.random() < 0.6]
    if rng.random() < 0.7 and edges:
        demands = [0] * (nl + nr)
        for i, j, _ in edges:
            x = rng.randint(0, 1)
            if demands[i] + x <= 3 and demands[nl + j] + x <= 3:
                demands[i] += x
                demands[nl + j] += x
    else:
        demands = [rng.randint(0, 3) for _ in range(nl + nr)]
    return BipartiteInstance(nl, nr, edges, demands)


def check_bmatching() -> tuple[bool, str]:
    bad, feasible = [], 0
    for seed in range(100):
        rng = random.Random(seed)
        inst = random_bmatching(rng)
        y = repair_matching_duals(inst, [rng.randint(-5, 10) for _ in range(inst.n)])
        expected = brute_force_bmatching(inst)
        try:
            got = solve_mwbm(inst, y).total_cost
        except NoPerfectBMatching:
            got = None
        feasible += expected is not None
        if got != expected:
            bad.append(seed)
    unit_bad = []
    for seed in range(100):
        rng = random.Random(10_000 + seed)
        base = random_bipartite(rng, rng.randint(1, 4))
        unit = BipartiteInstance(base.n_left, base.n_right, base.edges, [1] * base.n)
        y = random_feasible_dual(rng, base)
        if solve_mwbm(unit, y).total_cost != solve_mwpm(base, y).total_cost:
            unit_bad.append(seed)
    return (not bad and not unit_bad,
            f"{100 - len(bad)}/100 agree with multiplicity enumeration ({feasible} feasible); "
            f"unit demands equal perfect matching on {100 - len(unit_bad)}/100")


# 4 ---------------------------------------------------------------------------

def check_rounding() -> tuple[bool, str]:
    infeasible, over_bound, exact_nonzero = [], [], []
    worst = 0.0
    for seed in range(200):
        rng = random.Random(seed)
        g = random_digraph_without_negative_cycle(rng, rng.randint(2, 10), rng.randint(1, 25))
        y_bf = bellman_ford(g).dual
        pred = [v + rng.randint(-6, 6) if rng.random() < 0.6 else v for v in y_bf]
        counters = OpCounters()
        y = round_re_duals(g, pred, counters)
        if not re_feasible(g, y)[0]:
            infeasible.append(seed)
        err = measure_error(pred, y_bf)
        bound = 2 * err.l1 * (err.linf + 1)
        if counters.round_iterations > bound:
            over_bound.append(seed)
        if bound:
            worst = max(worst, counters.round_iterations / bound)
        exact = OpCounters()
        round_re_duals(g, y_bf, exact)
        if exact.round_iterations:
            exact_nonzero.append(seed)
    debug_runs = 0
    for seed in range(25):
        rng = random.Random(500 + seed)
        g = random_digraph_without_negative_cycle(rng, rng.randint(2, 10), rng.randint(1, 25))
        round_re_duals(g, [rng.randint(-8, 8) for _ in range(g.n)], debug=True)
        debug_runs += 1
    ok = not infeasible and not over_bound and not exact_nonzero
    return ok, (
        f"feasible {200 - len(infeasible)}/200, "
        f"iteration bound violations {len(over_bound)} (max ratio {worst:.2f}), "
        f"exact prediction runs with iterations {len(exact_nonzero)}, "
        f"{debug_runs} debug runs kept non-negative arcs non-negative")


# 5 ---------------------------------------------------------------------------

def check_shortest_paths() -> tuple[bool, str]:
    mismatches, rejected = [], 0
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(1, 8)
        g = random_digraph(rng, n, rng.randint(0, 3 * n))
        if seed % 4 == 0 and n > 1:
            g = plant_negative_cycle(rng, g)
        pred = [rng.randint(-10, 10) for _ in range(n)]
        try:
            oracle = bellman_ford_table(g)
        except NegativeCycleError:
            oracle = "negative cycle"
        try:
            mine = apsp_with_prediction(g, pred)
        except NegativeCycleError:
            mine = "negative cycle"
        if mine != oracle:
            mismatches.append(seed)
            continue
        if oracle == "negative cycle":
            rejected += 1
            continue
        flat = [d for row in oracle for d in row]
        expected_diam = None if UNREACHED in flat else max(flat)
        try:
            diam = diameter_with_prediction(g, pred)
        except Disconnected:
            diam = None
        if diam != expected_diam:
            mismatches.append(seed)
    return not mismatches, f"{200 - len(mismatches)}/200 agree (tables and diameter), {rejected} negative-cycle inputs rejected by both"


# 6 ---------------------------------------------------------------------------

def check_negative_cycle_detection() -> tuple[bool, str]:
    disagree, planted, bad_size = [], 0, []
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(2, 8)
        g = random_digraph_without_negative_cycle(rng, n, rng.randint(0, 2 * n))
        if seed % 3 == 0:
            g = plant_negative_cycle(rng, g)
            planted += 1
        if reduce_sp_to_matching(g).target.m != g.m + g.n:
            bad_size.append(seed)
        if detect_negative_cycle_via_matching(g) != bellman_ford(g).has_negative_cycle:
            disagree.append(seed)
    ok = not disagree and not bad_size and planted >= 50
    return ok, f"{200 - len(disagree)}/200 agree with Bellman-Ford, {planted} planted cycles, size m+n on {200 - len(bad_size)}/200"


# 7 ---------------------------------------------------------------------------

def random_small_dcs(rng: random.Random, maximize: bool) -> DCSInstance:
    nl = rng.randint(1, 3)
    nr = rng.randint(1, 6 - nl)
    deg = [0] * (nl + nr)
    edges = []
    for _ in range(rng.randint(0, 9)):
        i, j = rng.randrange(nl), rng.randrange(nr)
        if deg[i] < 3 and deg[nl + j] < 3:
            edges.append((i, j, rng.randint(-10, 10)))
            deg[i] += 1
            deg[nl + j] += 1
    if rng.random() < 0.5:
        upper = [0] * (nl + nr)
        for i, j, _ in edges:
            if rng.random() < 0.5:
                upper[i] += 1
                upper[nl + j] += 1
    else:
        upper = [rng.randint(0, d) for d in deg]
    return DCSInstance(nl, nr, edges, upper, maximize)


def random_small_unit_network(rng: random.Random) -> FlowNetwork:
    n = rng.randint(2, 6)
    outdeg, indeg, arcs = [0] * n, [0] * n, []
    for _ in range(rng.randint(1, 3 * n)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v and outdeg[u] < 3 and indeg[v] < 3:
            arcs.append((u, v, 1, rng.randint(0, 9)))
            outdeg[u] += 1
            indeg[v] += 1
    return FlowNetwork(n, arcs, 0, n - 1)


def check_reduction_round_trips() -> tuple[bool, str]:
    dcs_bad, dcs_cases, dcs_feasible = [], 0, 0
    for seed in range(150):
        rng = random.Random(seed)
        dcs = random_small_dcs(rng, maximize=seed % 2 == 1)
        expected = brute_force_dcs(dcs)
        try:
            chosen = solve_dcs(dcs)
            got = sum(dcs.edges[k][2] for k in chosen)
        except NoCompleteDCS:
            got = None
        dcs_cases += 1
        dcs_feasible += expected is not None
        if got != expected:
            dcs_bad.append(seed)
    flow_bad, flow_cases = [], 0
    for seed in range(150):
        rng = random.Random(seed)
        net = random_small_unit_network(rng)
        for value in range(0, 4):
            expected = brute_force_01flow(net, value)
            try:
                flow = solve_01flow(net, value)
                got = flow.cost() if flow.is_feasible_flow() and flow.value == value else "invalid"
            except NoFlowOfValueV:
                got = None
            flow_cases += 1
            if got != expected:
                flow_bad.append((seed, value))
    ok = not dcs_bad and not flow_bad
    return ok, (f"DCS {dcs_cases - len(dcs_bad)}/{dcs_cases} agree ({dcs_feasible} feasible), "
                f"0-1 flow {flow_cases - len(flow_bad)}/{flow_cases} agree")


# 8 ---------------------------------------------------------------------------

def check_push_relabel() -> tuple[bool, str]:
    wrong_value, cold_viol, warm_viol, exact_nonzero = [], [], [], []
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(2, 30)
        net = random_network(rng, n, rng.randint(0, 4 * n))
        m = net.m
        res = hl_push_relabel(net)
        c = res.counters
        if res.value != edmonds_karp_oracle(net)[0] or not res.flow.is_feasible_flow():
            wrong_value.append(seed)
        if c.relabels > n * n or c.saturating_pushes > m * n / 2 or c.nonsaturating_pushes > n ** 3:
            cold_viol.append(seed)

        pred = [max(0, f + rng.randint(-4, 4)) if rng.random() < 0.5 else f for f in res.flow.flow]
        warm = hl_push_relabel(net, PreflowPrediction(pred))
        budget = sum(n - h for v, h in enumerate(warm.initial_heights) if v != net.t)
        if warm.value != res.value:
            wrong_value.append(seed)
        if warm.counters.relabels > budget or warm.counters.nonsaturating_pushes > n * budget:
            warm_viol.append(seed)

        exact = hl_push_relabel(net, (res.flow, shortest_path_labeling(net, res.flow)))
        ec = exact.counters
        if ec.relabels or ec.saturating_pushes or ec.nonsaturating_pushes:
            exact_nonzero.append(seed)

    bad_fix = []
    for seed in range(200):
        rng = random.Random(7_000 + seed)
        n = rng.randint(2, 15)
        net = random_network(rng, n, rng.randint(1, 4 * n))
        fixed = fix_preflow(net, PreflowPrediction([rng.randint(0, 30) for _ in range(net.m)]))
        saturated = all(f == cap for (u, _, cap, _), f in zip(net.arcs, fixed.flow) if u == net.s)
        if not (fixed.is_preflow() and saturated):
            bad_fix.append(seed)

    ok = not (wrong_value or cold_viol or warm_viol or exact_nonzero or bad_fix)
    return ok, (f"value mismatches {len(wrong_value)}, cold bound violations {len(cold_viol)}, "
                f"warm bound violations {len(warm_viol)}, exact warm starts doing work {len(exact_nonzero)}, "
                f"invalid fixed preflows {len(bad_fix)}/200")


# 9 ---------------------------------------------------------------------------

def check_median_erm() -> tuple[bool, str]:
    beaten = []
    for seed in range(100):
        rng = np.random.default_rng(seed)
        dim = 3
        samples = rng.integers(-10, 11, size=(int(rng.integers(1, 10)), dim))
        h = np.array(batch_median_predictor(samples.tolist()))
        best = np.abs(samples - h).sum()
        # Loss is separable, so the full grid loss is a broadcast sum of per-coordinate losses.
        axes = [np.arange(samples[:, d].min() - 1, samples[:, d].max() + 2) for d in range(dim)]
        per_axis = [np.abs(samples[:, d][None, :] - axes[d][:, None]).sum(axis=1) for d in range(dim)]
        grid = per_axis[0][:, None, None] + per_axis[1][None, :, None] + per_axis[2][None, None, :]
        if best > grid.min():
            beaten.append(seed)
    return not beaten, f"median ties or beats every grid point on {100 - len(beaten)}/100 training sets"


# 10 --------------------------------------------------------------------------

def check_drift_experiment() -> tuple[bool, str]:
    sigmas = [0, 1, 2, 4]
    cells = sigma_sweep("matching", 6, 12, sigmas, range(20))
    mean = {(c.sigma, c.predictor): c.mean_counter for c in cells}
    monotone = {}
    for name in ("batch", "online"):
        series = [mean[s, name] for s in sigmas]
        monotone[name] = all(a <= b for a, b in zip(series, series[1:]))
    online_better = {s: mean[s, "online"] <= mean[s, "batch"] for s in sigmas if s <= 1}
    detail = "; ".join(
        f"{name} " + ", ".join(f"{mean[s, name]:.2f}" for s in sigmas) for name in ("none", "batch", "online"))
    detail += f"; online <= batch at sigma<=1 (logged only): {online_better}"
    return all(monotone.values()), f"mean while_iterations by sigma {sigmas}: {detail}"


# 11 --------------------------------------------------------------------------

def check_determinism(tmp_dir: str) -> tuple[bool, str]:
    cfg = ExperimentConfig("matching", 6, steps=12, train_steps=5, sigma=2, seed=99)
    in_process = rows_to_csv(run_experiment(cfg)).encode() == rows_to_csv(run_experiment(cfg)).encode()
    outputs = []
    for hash_seed in ("1", "2"):
        out = os.path.join(tmp_dir, f"bench-{hash_seed}.csv")
        subprocess.run([sys.executable, "-m", "warmstart", "bench", "--seed", "99", "--sigma", "2", "--out", out],
                       check=True, env={**os.environ, "PYTHONHASHSEED": hash_seed})
        with open(out, "rb") as fh:
            outputs.append(fh.read())
    across = outputs[0] == outputs[1]
    return in_process and across, f"in-process identical: {in_process}; separate processes identical: {across} ({len(outputs[0])} bytes)"


CRITERIA: list[tuple[int, str, Callable[..., tuple[bool, str]]]] = [
    (1, "matching optimality", check_matching_optimality),
    (2, "matching counter bounds under planted error", check_matching_counter_bounds),
    (3, "b-matching optimality", check_bmatching),
    (4, "potential rounding", check_rounding),
    (5, "shortest paths, all pairs, diameter", check_shortest_paths),
    (6, "negative cycle detection through matching", check_negative_cycle_detection),
    (7, "reduction round trips", check_reduction_round_trips),
    (8, "push-relabel", check_push_relabel),
    (9, "median predictor minimises l1 loss", check_median_erm),
    (10, "drift experiment", check_drift_experiment),
    (11, "determinism", check_determinism),
]


@pytest.mark.parametrize("number, title, check", CRITERIA, ids=[f"criterion-{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check, tmp_path):
    ok, detail = check(str(tmp_path)) if number == 11 else check()
    record(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for number, title, check in CRITERIA:
            ok, detail = check(tmp) if number == 11 else check()
            record(number, title, ok, detail)
            failures += not ok
    sys.exit(1 if failures else 0)
