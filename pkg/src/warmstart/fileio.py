"""Line-oriented text format for instances and predictions.

Ids are 1-based in files and 0-based in memory. Lines::

    c any comment
    p bipartite nL nR m      then m lines   e i j cost
    p bmatch nL nR m         then m lines   e i j cost, plus d v b
    p sp n m                 then m lines   a u v length
    p max n m s t            then m lines   a u v cap [cost]

In ``d v b`` lines ``v`` counts left vertices first (``1..nL``) and then
right vertices (``nL+1..nL+nR``); missing demands default to 1.
Prediction files hold ``h v value`` lines (one per vertex, any order) and
preflow predictions ``f u v value`` lines, matched to arcs in file order.
"""

from __future__ import annotations

import io
import os
from collections.abc import Iterable
from typing import TextIO, Union

from .errors import ParseError
from .graphcore import BipartiteInstance, DirectedLengthGraph, FlowNetwork

Instance = Union[BipartiteInstance, DirectedLengthGraph, FlowNetwork]
Source = Union[str, os.PathLike, TextIO]


def _read_lines(source: Source) -> list[str]:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return fh.read().splitlines()
    return source.read().splitlines()


def _tokens(lines: Iterable[str]):
    for lineno, raw in enumerate(lines, start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        yield lineno, parts


def _ints(lineno: int, parts: list[str], count: int | tuple[int, int]) -> list[int]:
    lo, hi = (count, count) if isinstance(count, int) else count
    if not lo <= len(parts) - 1 <= hi:
        raise ParseError(lineno, f"'{parts[0]}' line needs {lo if lo == hi else f'{lo}-{hi}'} fields, got {len(parts) - 1}")
    try:
        return [int(x) for x in parts[1:]]
    except ValueError:
        raise ParseError(lineno, f"non-integer field in {' '.join(parts)!r}") from None


def _index(lineno: int, value: int, limit: int, what: str) -> int:
    if not 1 <= value <= limit:
        raise ParseError(lineno, f"{what} {value} outside 1..{limit}")
    return value - 1


def parse_instance_text(text: str) -> Instance:
    return parse_instance(io.StringIO(text))


def parse_instance(source: Source) -> Instance:
    """Parse an instance file or stream; raises ParseError with the offending line number."""
    lines = _read_lines(source)
    header = None
    kind = None
    body: list[tuple[int, list[int], str]] = []
    for lineno, parts in _tokens(lines):
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise ParseError(lineno, "second problem line")
            if len(parts) < 2:
                raise ParseError(lineno, "problem line without a kind")
            kind = parts[1]
            arity = {"bipartite": 3, "bmatch": 3, "sp": 2, "max": 4}.get(kind)
            if arity is None:
                raise ParseError(lineno, f"unknown problem kind {kind!r}")
            header = (lineno, _ints(lineno, parts[1:], arity))
        elif tag in ("e", "a", "d"):
            if header is None:
                raise ParseError(lineno, f"'{tag}' line before the problem line")
            body.append((lineno, parts, tag))
        else:
            raise ParseError(lineno, f"unknown line type {tag!r}")
    if header is None:
        raise ParseError(len(lines), "missing problem line")
    hline, dims = header

    if kind in ("bipartite", "bmatch"):
        nl, nr, m = dims
        edges, demands = [], None
        for lineno, parts, tag in body:
            if tag == "e":
                i, j, c = _ints(lineno, parts, 3)
                if c < 0:
                    raise ParseError(lineno, f"negative cost {c}")
                edges.append((_index(lineno, i, nl, "left vertex"), _index(lineno, j, nr, "right vertex"), c))
            elif tag == "d" and kind == "bmatch":
                v, b = _ints(lineno, parts, 2)
                if demands is None:
                    demands = [1] * (nl + nr)
                if b < 0:
                    raise ParseError(lineno, f"negative demand {b}")
                demands[_index(lineno, v, nl + nr, "vertex")] = b
            else:
                raise ParseError(lineno, f"'{tag}' line in a {kind} file")
        if len(edges) != m:
            raise ParseError(hline, f"header promises {m} edges, found {len(edges)}")
        if kind == "bmatch" and demands is None:
            demands = [1] * (nl + nr)
        parallel = len({(i, j) for i, j, _ in edges}) != len(edges)
        try:
            return BipartiteInstance(nl, nr, edges, demands, allow_parallel=parallel)
        except ValueError as exc:
            raise ParseError(hline, str(exc)) from None

    n, m = dims[0], dims[1]
    arcs = []
    for lineno, parts, tag in body:
        if tag != "a":
            raise ParseError(lineno, f"'{tag}' line in a {kind} file")
        if kind == "sp":
            u, v, length = _ints(lineno, parts, 3)
            arcs.append((_index(lineno, u, n, "vertex"), _index(lineno, v, n, "vertex"), length))
        else:
            fields = _ints(lineno, parts, (3, 4))
            u, v, cap = fields[:3]
            if cap < 0:
                raise ParseError(lineno, f"negative capacity {cap}")
            arc = (_index(lineno, u, n, "vertex"), _index(lineno, v, n, "vertex"), cap)
            arcs.append(arc + (fields[3],) if len(fields) == 4 else arc)
    if len(arcs) != m:
        raise ParseError(hline, f"header promises {m} arcs, found {len(arcs)}")
    try:
        if kind == "sp":
            return DirectedLengthGraph(n, arcs)
        s, t = dims[2], dims[3]
        return FlowNetwork(n, arcs, _index(hline, s, n, "source"), _index(hline, t, n, "sink"))
    except ValueError as exc:
        raise ParseError(hline, str(exc)) from None


def format_instance(inst: Instance) -> str:
    out = []
    if isinstance(inst, BipartiteInstance):
        kind = "bmatch" if inst.demands is not None else "bipartite"
        out.append(f"p {kind} {inst.n_left} {inst.n_right} {inst.m}")
        out += [f"e {i + 1} {j + 1} {c}" for i, j, c in inst.edges]
        if inst.demands is not None:
            out += [f"d {v + 1} {b}" for v, b in enumerate(inst.demands)]
    elif isinstance(inst, DirectedLengthGraph):
        out.append(f"p sp {inst.n} {inst.m}")
        out += [f"a {u + 1} {v + 1} {w}" for u, v, w in inst.arcs]
    elif isinstance(inst, FlowNetwork):
        out.append(f"p max {inst.n} {inst.m} {inst.s + 1} {inst.t + 1}")
        with_cost = any(c for *_, c in inst.arcs)
        for u, v, cap, cost in inst.arcs:
            out.append(f"a {u + 1} {v + 1} {cap} {cost}" if with_cost else f"a {u + 1} {v + 1} {cap}")
    else:
        raise TypeError(f"cannot write {type(inst).__name__}")
    return "\n".join(out) + "\n"


def write_instance(inst: Instance, dest: str | os.PathLike | TextIO) -> None:
    text = format_instance(inst)
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        dest.write(text)


def parse_prediction(source: Source, n: int) -> list[int]:
    """Vertex prediction from ``h v value`` lines; unlisted vertices default to 0."""
    y = [0] * n
    for lineno, parts in _tokens(_read_lines(source)):
        if parts[0] != "h":
            raise ParseError(lineno, f"expected 'h' line, got {parts[0]!r}")
        v, value = _ints(lineno, parts, 2)
        y[_index(lineno, v, n, "vertex")] = value
    return y


def format_prediction(y: Iterable[int]) -> str:
    return "".join(f"h {v + 1} {value}\n" for v, value in enumerate(y))


def parse_preflow(source: Source, net: FlowNetwork) -> list[int]:
    """Per-arc flow from ``f u v value`` lines.

    Each line goes to the first arc ``u -> v`` not already assigned, so
    parallel arcs are filled in file order.
    """
    slots: dict[tuple[int, int], list[int]] = {}
    for k, (u, v, _, _) in enumerate(net.arcs):
        slots.setdefault((u, v), []).append(k)
    flow = [0] * net.m
    for lineno, parts in _tokens(_read_lines(source)):
        if parts[0] != "f":
            raise ParseError(lineno, f"expected 'f' line, got {parts[0]!r}")
        u, v, value = _ints(lineno, parts, 3)
        key = (_index(lineno, u, net.n, "vertex"), _index(lineno, v, net.n, "vertex"))
        if value < 0:
            raise ParseError(lineno, f"negative flow {value}")
        if not slots.get(key):
            raise ParseError(lineno, f"no unassigned arc {u} -> {v}")
        flow[slots[key].pop(0)] = value
    return flow


def format_preflow(net: FlowNetwork, flow: Iterable[int]) -> str:
    return "".join(f"f {u + 1} {v + 1} {f}\n" for (u, v, _, _), f in zip(net.arcs, flow))
