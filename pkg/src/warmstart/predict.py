"""Predictors, prediction-error metrics and a seeded drifting-instance generator."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyTrainingSet,
    GenerationFailed,
    InvalidParams,
    NegativeCycleError,
)
from .graphcore import BipartiteInstance, DirectedLengthGraph, DualVector, FlowNetwork, bellman_ford
from .matching import optimal_matching_dual
from .pushrelabel import hl_push_relabel

MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit SplitMix generator.

    Chosen over ``random.Random`` so that drift families can be reproduced
    bit for bit by a few lines of code in any language.
    """

    GAMMA = 0x9E3779B97F4A7C15
    MUL1 = 0xBF58476D1CE4E5B9
    MUL2 = 0x94D049BB133111EB

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * self.MUL1) & MASK64
        z = ((z ^ (z >> 27)) * self.MUL2) & MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Integer in ``[lo, hi]`` by modulo reduction (bias below 2**-50 for our ranges)."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)


def batch_median_predictor(training: Sequence[Sequence[int]]) -> DualVector:
    """Coordinate-wise lower median of the training optima.

    The median of each coordinate minimises the sum of absolute deviations,
    so the result minimises the total l1 distance to the training set. The
    lower median keeps the answer integral on even sample counts.
    """
    if len(training) == 0:
        raise EmptyTrainingSet("no training samples")
    dims = {len(sample) for sample in training}
    if len(dims) != 1:
        raise DimensionMismatch(f"training samples have lengths {sorted(dims)}")
    data = np.sort(np.asarray(training, dtype=np.int64), axis=0)
    return [int(x) for x in data[(len(training) - 1) // 2]]


def online_predictor(previous: Sequence[int] | None, dim: int) -> DualVector:
    """Last observed optimum, or zeros before anything has been observed."""
    if previous is None:
        return [0] * dim
    if len(previous) != dim:
        raise DimensionMismatch(f"previous optimum has length {len(previous)}, expected {dim}")
    return list(previous)


@dataclass(frozen=True)
class ErrorReport:
    l0: int
    l1: int
    linf: int
    l_b0: int | None = None
    l_b1: int | None = None


def measure_error(predicted: Sequence[int], optimal: Sequence[int],
                  demands: Sequence[int] | None = None) -> ErrorReport:
    """Exact integer distances between a prediction and an optimum.

    With ``demands`` the weighted variants ``sum b_i [y_i != z_i]`` and
    ``sum b_i |y_i - z_i|`` are filled in as well.
    """
    if len(predicted) != len(optimal):
        raise DimensionMismatch(f"lengths {len(predicted)} and {len(optimal)} differ")
    diff = [abs(a - b) for a, b in zip(predicted, optimal)]
    l_b0 = l_b1 = None
    if demands is not None:
        if len(demands) != len(diff):
            raise DimensionMismatch(f"{len(demands)} demands for {len(diff)} coordinates")
        l_b0 = sum(b for b, d in zip(demands, diff) if d)
        l_b1 = sum(b * d for b, d in zip(demands, diff))
    return ErrorReport(
        l0=sum(1 for d in diff if d),
        l1=sum(diff),
        linf=max(diff, default=0),
        l_b0=l_b0,
        l_b1=l_b1,
    )


def excess_dual_objective(optimal: Sequence[int], predicted: Sequence[int]) -> int:
    """Signed ``sum(optimal) - sum(predicted)``; logged by the bench, never asserted on."""
    return sum(optimal) - sum(predicted)


def sample_complexity_bound(d: int, M: float, eps: float, delta: float) -> float:
    """``(d*M/eps)**2 * (d*ln d + ln(1/delta))`` with every hidden constant set to 1.

    Only the order of magnitude is meaningful.
    """
    if d < 1 or M <= 0 or eps <= 0 or not 0 < delta < 1:
        raise InvalidParams(f"need d >= 1, M > 0, eps > 0, 0 < delta < 1; got {d}, {M}, {eps}, {delta}")
    return (d * M / eps) ** 2 * (d * math.log(d) + math.log(1 / delta))


def sample_complexity_estimate(d: int, M: float, eps: float, delta: float) -> int:
    """Number of training instances suggested by :func:`sample_complexity_bound`, rounded up."""
    # Shave float noise so exact integers are not bumped up by one.
    return max(1, math.ceil(sample_complexity_bound(d, M, eps, delta) - 1e-9))


KINDS = ("matching", "sp", "flow")

MATCHING_COST_MAX = 20
MATCHING_COST_CLAMP = 40
SP_LENGTH_RANGE = (-5, 10)
FLOW_CAP_MAX = 20
FLOW_CAP_CLAMP = 40
MAX_RETRIES = 100


@dataclass(frozen=True)
class InstanceFamily:
    """A base instance and ``steps - 1`` random-walk successors on the same vertex set."""

    kind: str
    n: int
    steps: int
    sigma: int
    seed: int
    instances: tuple

    def __len__(self) -> int:
        return len(self.instances)

    def __getitem__(self, t: int):
        return self.instances[t]


def _walk(rng: SplitMix64, values: list[int], sigma: int, lo: int, hi: int) -> list[int]:
    return [min(hi, max(lo, v + rng.randint(-sigma, sigma))) for v in values]


def _has_negative_cycle(n: int, arcs: list[tuple[int, int, int]]) -> bool:
    return bellman_ford(DirectedLengthGraph(n, arcs)).has_negative_cycle


def gen_drift_family(kind: str, n: int, steps: int, sigma: int, seed: int) -> InstanceFamily:
    """Seeded family of ``steps`` instances whose weights follow a clamped random walk.

    ``matching``: complete ``n x n`` bipartite graph, costs start in [0, 20]
    and stay in [0, 40]. ``sp``: ``2n`` random arcs with lengths in [-5, 10];
    a step that would create a negative cycle is redrawn. ``flow``: ``3n``
    random arcs from ``0`` towards ``n - 1`` candidates, capacities start in
    [1, 20] and stay in [0, 40].
    """
    if kind not in KINDS:
        raise InvalidParams(f"unknown kind {kind!r}; expected one of {KINDS}")
    if n < 2 or steps < 1 or sigma < 0:
        raise InvalidParams(f"need n >= 2, steps >= 1, sigma >= 0; got {n}, {steps}, {sigma}")
    rng = SplitMix64(seed)
    instances: list = []

    if kind == "matching":
        pairs = [(i, j) for i in range(n) for j in range(n)]
        costs = [rng.randint(0, MATCHING_COST_MAX) for _ in pairs]
        for t in range(steps):
            if t:
                costs = _walk(rng, costs, sigma, 0, MATCHING_COST_CLAMP)
            instances.append(BipartiteInstance(n, n, [(i, j, c) for (i, j), c in zip(pairs, costs)]))

    elif kind == "sp":
        lo, hi = SP_LENGTH_RANGE
        for _ in range(MAX_RETRIES):
            ends = []
            while len(ends) < 2 * n:
                u, v = rng.randint(0, n - 1), rng.randint(0, n - 1)
                if u != v:
                    ends.append((u, v))
            lengths = [rng.randint(lo, hi) for _ in ends]
            if not _has_negative_cycle(n, [(u, v, w) for (u, v), w in zip(ends, lengths)]):
                break
        else:
            raise GenerationFailed(f"no negative-cycle-free base graph in {MAX_RETRIES} draws")
        for t in range(steps):
            if t:
                for _ in range(MAX_RETRIES):
                    drawn = _walk(rng, lengths, sigma, lo, hi)
                    if not _has_negative_cycle(n, [(u, v, w) for (u, v), w in zip(ends, drawn)]):
                        lengths = drawn
                        break
                else:
                    raise GenerationFailed(f"step {t}: every redraw had a negative cycle")
            instances.append(DirectedLengthGraph(n, [(u, v, w) for (u, v), w in zip(ends, lengths)]))

    else:
        ends = []
        while len(ends) < 3 * n:
            u, v = rng.randint(0, n - 1), rng.randint(0, n - 1)
            if u != v and u != n - 1 and v != 0:
                ends.append((u, v))
        caps = [rng.randint(1, FLOW_CAP_MAX) for _ in ends]
        for t in range(steps):
            if t:
                caps = _walk(rng, caps, sigma, 0, FLOW_CAP_CLAMP)
            instances.append(FlowNetwork(n, [(u, v, c) for (u, v), c in zip(ends, caps)], 0, n - 1))

    return InstanceFamily(kind, n, steps, sigma, seed, tuple(instances))


def reference_optimum(kind: str, instance) -> DualVector:
    """The optimum a predictor tries to hit: matching duals, shortest-path potentials or a max flow."""
    if kind == "matching":
        return optimal_matching_dual(instance)
    if kind == "sp":
        bf = bellman_ford(instance)
        if bf.has_negative_cycle:
            raise NegativeCycleError(cycle=bf.negative_cycle)
        return bf.dual
    if kind == "flow":
        return list(hl_push_relabel(instance).flow.flow)
    raise InvalidParams(f"unknown kind {kind!r}")
