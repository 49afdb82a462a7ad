"""``warmstart`` command line: solve, reduce, generate, benchmark and verify.

Exit status is 0 on success, 1 when the instance has no solution (or a
verification disagrees), and 2 on malformed input or bad options.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections.abc import Sequence

from . import fileio
from .bench import PREDICTORS, ExperimentConfig, rows_to_csv, run_experiment
from .errors import (
    Disconnected,
    InfeasibleBounds,
    InfeasibleDual,
    InvalidParams,
    NegativeCycleError,
    NoCompleteDCS,
    NoFlowOfValueV,
    NoPerfectBMatching,
    NoPerfectMatching,
    OracleTooLarge,
    ParseError,
    WarmstartError,
)
from .graphcore import (
    UNREACHED,
    BipartiteInstance,
    DirectedLengthGraph,
    FlowNetwork,
    OpCounters,
    edmonds_karp_oracle,
)
from .matching import repair_matching_duals, solve_mwbm, solve_mwpm
from .oracles import bellman_ford_table, brute_force_bmatching, brute_force_mwpm
from .predict import KINDS, gen_drift_family
from .pushrelabel import PreflowPrediction, hl_push_relabel
from .reductions import (
    DCSInstance,
    detect_negative_cycle_via_matching,
    reduce_01flow_to_dcs,
    reduce_dcs_to_matching,
    reduce_sp_to_matching,
    solve_01flow,
    solve_dcs,
    shortest_paths_via_matching,
)
from .spaths import apsp_with_prediction, diameter_with_prediction, round_re_duals, sssp_with_dual

NO_SOLUTION = (
    NoPerfectMatching, NoPerfectBMatching, NegativeCycleError, Disconnected,
    InfeasibleBounds, NoCompleteDCS, NoFlowOfValueV, InfeasibleDual,
)


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("WARMSTART_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"WARMSTART_SEED must be an integer, got {raw!r}") from None


def _load(args, expected: type | tuple[type, ...]):
    inst = fileio.parse_instance(args.input)
    if not isinstance(inst, expected):
        names = expected.__name__ if isinstance(expected, type) else "/".join(t.__name__ for t in expected)
        raise UsageError(f"{args.input}: expected a {names} instance, got {type(inst).__name__}")
    return inst


def _prediction(args, n: int) -> list[int]:
    if getattr(args, "prediction", None):
        return fileio.parse_prediction(args.prediction, n)
    return [0] * n


def _dist(d: int | None) -> str:
    return "inf" if d is UNREACHED else str(d)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print_matching(inst: BipartiteInstance, result) -> None:
    print(f"cost {result.total_cost}")
    for k in result.matched_edges:
        i, j, _ = inst.edges[k]
        print(f"m {i + 1} {j + 1}")
    sys.stdout.write(fileio.format_prediction(result.final_duals))
    _print_counters(result.counters)


def _print_counters(counters) -> None:
    for name, value in counters.as_dict().items():
        print(f"c {name} {value}")


def cmd_solve_matching(args) -> int:
    inst = _load(args, BipartiteInstance)
    y = repair_matching_duals(inst, _prediction(args, inst.n))
    _print_matching(inst, solve_mwpm(inst, y))
    return 0


def cmd_solve_bmatching(args) -> int:
    inst = _load(args, BipartiteInstance)
    y = repair_matching_duals(inst, _prediction(args, inst.n))
    _print_matching(inst, solve_mwbm(inst, y))
    return 0


def cmd_round_duals(args) -> int:
    g = _load(args, DirectedLengthGraph)
    counters = OpCounters()
    y = round_re_duals(g, _prediction(args, g.n), counters)
    sys.stdout.write(fileio.format_prediction(y))
    print(f"c round_iterations {counters.round_iterations}")
    return 0


def cmd_sssp(args) -> int:
    g = _load(args, DirectedLengthGraph)
    source = args.source - 1
    if not 0 <= source < g.n:
        raise UsageError(f"source {args.source} outside 1..{g.n}")
    y = round_re_duals(g, _prediction(args, g.n))
    for v, d in enumerate(sssp_with_dual(g, source, y)):
        print(f"dist {v + 1} {_dist(d)}")
    return 0


def cmd_apsp(args) -> int:
    g = _load(args, DirectedLengthGraph)
    for row in apsp_with_prediction(g, _prediction(args, g.n)):
        print(" ".join(_dist(d) for d in row))
    return 0


def cmd_diameter(args) -> int:
    g = _load(args, DirectedLengthGraph)
    print(diameter_with_prediction(g, _prediction(args, g.n)))
    return 0


def cmd_reduce(args) -> int:
    if args.problem == "sp":
        g = _load(args, DirectedLengthGraph)
        art = reduce_sp_to_matching(g)
        if detect_negative_cycle_via_matching(g):
            print("negative-cycle yes")
            code = 1
        else:
            print("negative-cycle no")
            dist, _ = shortest_paths_via_matching(g, 0)
            for v, d in enumerate(dist):
                print(f"dist {v + 1} {_dist(d)}")
            code = 0
    elif args.problem == "dcs":
        inst = _load(args, BipartiteInstance)
        dcs = DCSInstance(inst.n_left, inst.n_right, inst.edges,
                          [inst.b(v) for v in range(inst.n)], maximize=args.maximize)
        art = reduce_dcs_to_matching(dcs)
        chosen = solve_dcs(dcs)
        print(f"weight {sum(dcs.edges[k][2] for k in chosen)}")
        for k in chosen:
            i, j, _ = dcs.edges[k]
            print(f"e {i + 1} {j + 1}")
        code = 0
    else:
        net = _load(args, FlowNetwork)
        if args.value is None:
            raise UsageError("reduce flow01 needs --value")
        art = reduce_dcs_to_matching(reduce_01flow_to_dcs(net, args.value).dcs)
        flow = solve_01flow(net, args.value)
        print(f"cost {flow.cost()}")
        for (u, v, _, _), f in zip(net.arcs, flow.flow):
            if f:
                print(f"f {u + 1} {v + 1} {f}")
        code = 0
    if args.out:
        fileio.write_instance(art.target, args.out)
    return code


def cmd_maxflow(args) -> int:
    net = _load(args, FlowNetwork)
    warm = PreflowPrediction(fileio.parse_preflow(args.prediction, net)) if args.prediction else None
    res = hl_push_relabel(net, warm)
    print(f"value {res.value}")
    print("cut " + " ".join(str(v + 1) for v in sorted(res.source_side)))
    sys.stdout.write(fileio.format_preflow(net, res.flow.flow))
    _print_counters(res.counters)
    return 0


def cmd_gen(args) -> int:
    family = gen_drift_family(args.kind, args.n, args.steps, args.sigma, args.seed)
    if not 0 <= args.index < len(family):
        raise UsageError(f"--index must be in 0..{len(family) - 1}")
    _emit(fileio.format_instance(family[args.index]), args.out)
    return 0


def cmd_bench(args) -> int:
    predictors = tuple(args.predictor) if args.predictor else PREDICTORS
    cfg = ExperimentConfig(args.kind, args.n, args.steps, args.train_steps, args.sigma,
                           args.seed, predictors, args.timing)
    _emit(rows_to_csv(run_experiment(cfg)), args.out)
    return 0


def cmd_verify(args) -> int:
    inst = fileio.parse_instance(args.input)
    if isinstance(inst, BipartiteInstance):
        y = repair_matching_duals(inst, _prediction(args, inst.n))
        if inst.demands is None:
            oracle = brute_force_mwpm(inst)
            try:
                mine = solve_mwpm(inst, y).total_cost
            except NoPerfectMatching:
                mine = None
        else:
            oracle = brute_force_bmatching(inst)
            try:
                mine = solve_mwbm(inst, y).total_cost
            except NoPerfectBMatching:
                mine = None
        name = "brute-force"
    elif isinstance(inst, DirectedLengthGraph):
        try:
            oracle = bellman_ford_table(inst)
        except NegativeCycleError:
            oracle = "negative-cycle"
        try:
            mine = apsp_with_prediction(inst, _prediction(args, inst.n))
        except NegativeCycleError:
            mine = "negative-cycle"
        name = "bellman-ford"
    else:
        oracle = edmonds_karp_oracle(inst)[0]
        mine = hl_push_relabel(inst).value
        name = "edmonds-karp"
    if args.oracle not in ("auto", name):
        raise UsageError(f"oracle {args.oracle} does not apply; this instance uses {name}")
    agree = mine == oracle
    print(f"{'agree' if agree else 'disagree'} {name}")
    return 0 if agree else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="warmstart", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p, prediction=True):
        p.add_argument("--input", required=True, help="instance file")
        if prediction:
            p.add_argument("--prediction", help="prediction file ('h' lines, or 'f' lines for maxflow)")
        return p

    with_input(sub.add_parser("solve-matching", help="min-cost perfect matching")).set_defaults(func=cmd_solve_matching)
    with_input(sub.add_parser("solve-bmatching", help="min-cost perfect b-matching")).set_defaults(func=cmd_solve_bmatching)
    with_input(sub.add_parser("round-duals", help="round a potential to a feasible one")).set_defaults(func=cmd_round_duals)
    p = with_input(sub.add_parser("sssp", help="single-source distances"))
    p.add_argument("--source", type=int, default=1)
    p.set_defaults(func=cmd_sssp)
    with_input(sub.add_parser("apsp", help="all-pairs distances")).set_defaults(func=cmd_apsp)
    with_input(sub.add_parser("diameter", help="largest pairwise distance")).set_defaults(func=cmd_diameter)

    p = with_input(sub.add_parser("reduce", help="solve through a reduction to matching"), prediction=False)
    p.add_argument("problem", choices=("sp", "dcs", "flow01"))
    p.add_argument("--value", type=int, help="flow value for flow01")
    p.add_argument("--maximize", action="store_true", help="dcs: maximise weight")
    p.add_argument("--out", help="write the reduced matching instance here")
    p.set_defaults(func=cmd_reduce)

    with_input(sub.add_parser("maxflow", help="max flow and min cut")).set_defaults(func=cmd_maxflow)

    seed = _default_seed()
    p = sub.add_parser("gen", help="write one instance of a drift family")
    p.add_argument("--kind", choices=KINDS, default="matching")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--index", type=int, default=0, help="which step to write")
    p.add_argument("--sigma", type=int, default=0)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="drift experiment, CSV output")
    p.add_argument("--kind", choices=KINDS, default="matching")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--train-steps", type=int, default=5)
    p.add_argument("--sigma", type=int, default=1)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--predictor", action="append", choices=PREDICTORS,
                   help="repeatable; default runs all")
    p.add_argument("--timing", action="store_true", help="fill wall_time_ns (makes output nondeterministic)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = with_input(sub.add_parser("verify", help="compare against a brute-force or textbook oracle"))
    p.add_argument("--oracle", choices=("auto", "brute-force", "bellman-ford", "edmonds-karp"),
                   default="auto", help="default picks the oracle matching the instance kind")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except NO_SOLUTION as exc:
        print(f"no solution: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, InvalidParams, OracleTooLarge, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WarmstartError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
