"""Drift experiment: cold start versus batch and online predictors, one CSV row per run."""

from __future__ import annotations

import csv
import io
import time
from collections.abc import Iterable, Sequence
from dataclasses import astuple, dataclass, fields

from .errors import InvalidParams, WarmstartError
from .graphcore import OpCounters
from .matching import repair_matching_duals, solve_mwpm
from .predict import (
    ErrorReport,
    batch_median_predictor,
    gen_drift_family,
    measure_error,
    online_predictor,
)
from .pushrelabel import PreflowPrediction, hl_push_relabel
from .spaths import feasible_potential, round_re_duals, sssp_with_dual

PREDICTORS = ("none", "batch", "online")


@dataclass
class RunRecord:
    instance_id: str
    kind: str
    n: int
    m: int
    predictor_name: str
    l0: int | None
    l1: int | None
    linf: int | None
    first_match_size: int
    while_iterations: int
    ff_augmentations: int
    round_iterations: int
    relabels: int
    saturating_pushes: int
    nonsaturating_pushes: int
    objective: int
    wall_time_ns: int | None


CSV_COLUMNS = tuple(f.name for f in fields(RunRecord))


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str = "matching"
    n: int = 6
    steps: int = 12
    train_steps: int = 5
    sigma: int = 1
    seed: int = 0
    predictors: tuple[str, ...] = PREDICTORS
    timing: bool = False

    def __post_init__(self) -> None:
        unknown = set(self.predictors) - set(PREDICTORS)
        if unknown:
            raise InvalidParams(f"unknown predictors {sorted(unknown)}")
        if self.steps < 1 or self.train_steps < 0:
            raise InvalidParams("need steps >= 1 and train_steps >= 0")


@dataclass
class _Run:
    counters: OpCounters
    objective: int
    optimum: list[int]
    used: list[int]
    elapsed: int


def _solve(kind: str, inst, prediction: Sequence[int] | None) -> _Run:
    """Run the kind's solver; ``prediction=None`` is a cold start.

    ``used`` is the vector the error is measured on: the repaired dual for
    matchings and the raw prediction otherwise.
    """
    counters = OpCounters()
    start = time.perf_counter_ns()
    if kind == "matching":
        y = repair_matching_duals(inst, prediction if prediction is not None else [0] * inst.n)
        res = solve_mwpm(inst, y, counters)
        run = _Run(counters, res.total_cost, res.final_duals, y, 0)
    elif kind == "sp":
        y0 = list(prediction) if prediction is not None else [0] * inst.n
        y = round_re_duals(inst, y0, counters)
        dist = sssp_with_dual(inst, 0, y, counters)
        run = _Run(counters, sum(d for d in dist if d is not None), feasible_potential(inst), y0, 0)
    elif kind == "flow":
        warm = PreflowPrediction(list(prediction)) if prediction is not None else None
        res = hl_push_relabel(inst, warm, counters)
        used = list(prediction) if prediction is not None else [0] * inst.m
        run = _Run(counters, res.value, list(res.flow.flow), used, 0)
    else:
        raise InvalidParams(f"unknown kind {kind!r}")
    run.elapsed = time.perf_counter_ns() - start
    return run


def _record(cfg: ExperimentConfig, step: int, inst, predictor: str, run: _Run,
            error: ErrorReport | None) -> RunRecord:
    c = run.counters
    return RunRecord(
        instance_id=f"{cfg.kind}-n{cfg.n}-s{cfg.seed}-sigma{cfg.sigma}-t{step}",
        kind=cfg.kind,
        n=cfg.n,
        m=inst.m,
        predictor_name=predictor,
        l0=error.l0 if error else None,
        l1=error.l1 if error else None,
        linf=error.linf if error else None,
        first_match_size=c.first_match_size,
        while_iterations=c.while_iterations,
        ff_augmentations=c.ff_augmentations,
        round_iterations=c.round_iterations,
        relabels=c.relabels,
        saturating_pushes=c.saturating_pushes,
        nonsaturating_pushes=c.nonsaturating_pushes,
        objective=run.objective,
        wall_time_ns=run.elapsed if cfg.timing else None,
    )


def run_experiment(cfg: ExperimentConfig) -> list[RunRecord]:
    """Rows for every evaluation step, ordered by step and then predictor.

    The family has ``train_steps + steps`` instances. The batch predictor is
    the coordinate median of the optima of the first ``train_steps``; the
    online predictor is the optimum of the step just before. Each step also
    gets a cold-start row named ``none`` whose error columns are empty.
    """
    family = gen_drift_family(cfg.kind, cfg.n, cfg.train_steps + cfg.steps, cfg.sigma, cfg.seed)
    optima: list[list[int]] = []
    for t in range(cfg.train_steps):
        optima.append(_solve(cfg.kind, family[t], None).optimum)
    batch = batch_median_predictor(optima) if optima else None

    rows: list[RunRecord] = []
    for step in range(cfg.steps):
        inst = family[cfg.train_steps + step]
        try:
            cold = _solve(cfg.kind, inst, None)
            optimum = cold.optimum
            dim = len(optimum)
            for name in cfg.predictors:
                if name == "none":
                    rows.append(_record(cfg, step, inst, name, cold, None))
                    continue
                if name == "batch":
                    pred = batch if batch is not None else [0] * dim
                else:
                    pred = online_predictor(optima[-1] if optima else None, dim)
                run = _solve(cfg.kind, inst, pred)
                if run.objective != cold.objective:
                    raise WarmstartError(f"warm objective {run.objective} != cold {cold.objective}")
                rows.append(_record(cfg, step, inst, name, run, measure_error(run.used, optimum)))
        except WarmstartError as exc:
            raise type(exc)(f"{cfg.kind} seed {cfg.seed} sigma {cfg.sigma} step {step}: {exc}") from exc
        optima.append(optimum)
    return rows


def rows_to_csv(rows: Iterable[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow("" if v is None else v for v in astuple(row))
    return buf.getvalue()


@dataclass(frozen=True)
class SweepCell:
    sigma: int
    predictor: str
    mean_l0: float | None
    mean_counter: float


MAIN_COUNTER = {"matching": "while_iterations", "sp": "round_iterations", "flow": "relabels"}


def sigma_sweep(kind: str, n: int, steps: int, sigmas: Sequence[int], seeds: Iterable[int],
                train_steps: int = 5) -> list[SweepCell]:
    """Mean prediction error and main work counter per (sigma, predictor), averaged over seeds."""
    seeds = list(seeds)
    metric = MAIN_COUNTER[kind]
    cells = []
    for sigma in sigmas:
        rows: list[RunRecord] = []
        for seed in seeds:
            cfg = ExperimentConfig(kind, n, steps, train_steps, sigma, seed)
            rows += run_experiment(cfg)
        for name in PREDICTORS:
            mine = [r for r in rows if r.predictor_name == name]
            l0 = [r.l0 for r in mine if r.l0 is not None]
            cells.append(SweepCell(
                sigma, name,
                sum(l0) / len(l0) if l0 else None,
                sum(getattr(r, metric) for r in mine) / len(mine),
            ))
    return cells
