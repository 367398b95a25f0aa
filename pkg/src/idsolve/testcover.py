"""Test Cover: set systems, auxiliary graph, oracle and exact solver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import kernels
from .errors import InputError, RefusalError
from .graph import Graph, Partition, Solution, _column, int_field
from .refinement import RefinementInstance, solve_instance

TC_BRUTE_CAP = 20


@dataclass(frozen=True)
class SetSystem:
    universe_size: int
    tests: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, universe_size: int, tests: Iterable[Iterable[int]]) -> "SetSystem":
        if universe_size < 0:
            raise InputError("universe size must be non-negative")
        out = []
        for t in tests:
            items = tuple(sorted(set(int(x) for x in t)))
            for x in items:
                if not 0 <= x < universe_size:
                    raise InputError(f"item {x} out of range for |U|={universe_size}")
            out.append(items)
        return cls(universe_size, tuple(out))

    def dedup(self) -> tuple["SetSystem", list[int]]:
        """Drop repeated tests; returns the reduced system and kept indices."""
        seen: dict[tuple[int, ...], int] = {}
        kept = []
        for i, t in enumerate(self.tests):
            if t not in seen:
                seen[t] = i
                kept.append(i)
        return SetSystem(self.universe_size, tuple(self.tests[i] for i in kept)), kept

    def item_masks(self) -> list[int]:
        """Bitmask over test indices for every item."""
        out = [0] * self.universe_size
        for j, t in enumerate(self.tests):
            for x in t:
                out[x] |= 1 << j
        return out


def parse_set_system(text: str) -> SetSystem:
    size = None
    declared = None
    tests = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "u":
            if size is not None:
                raise InputError(f"line {lineno}, column 1: duplicate header")
            size, declared = int_field(raw, parts, 1, lineno), int_field(raw, parts, 2, lineno)
        elif parts[0] == "t":
            if size is None:
                raise InputError(f"line {lineno}, column 1: test before header")
            items = [int_field(raw, parts, i, lineno) for i in range(1, len(parts))]
            for i, x in enumerate(items, 1):
                if not 1 <= x <= size:
                    raise InputError(f"line {lineno}, column {_column(raw, i)}: item {x} out of range 1..{size}")
            tests.append([x - 1 for x in items])
        else:
            raise InputError(f"line {lineno}, column {_column(raw, 0)}: unknown record {parts[0]!r}")
    if size is None:
        raise InputError("missing 'u <|U|> <|F|>' header")
    if declared != len(tests):
        raise InputError(f"header declares {declared} tests, found {len(tests)}")
    return SetSystem.of(size, tests)


def format_set_system(sys: SetSystem) -> str:
    lines = [f"u {sys.universe_size} {len(sys.tests)}"]
    for t in sys.tests:
        lines.append(" ".join(["t"] + [str(x + 1) for x in t]))
    return "\n".join(lines) + "\n"


def aux_graph(sys: SetSystem) -> tuple[Graph, list[int], list[int]]:
    """Tests become vertices ``0..|F|-1``, items follow."""
    nf = len(sys.tests)
    edges = [(j, nf + x) for j, t in enumerate(sys.tests) for x in t]
    g = Graph.from_edges(nf + sys.universe_size, edges)
    return g, list(range(nf)), list(range(nf, nf + sys.universe_size))


def is_test_cover(sys: SetSystem, s: Iterable[int]) -> bool:
    chosen = 0
    for j in s:
        if not 0 <= j < len(sys.tests):
            raise InputError(f"test index {j} out of range")
        chosen |= 1 << j
    codes = [m & chosen for m in sys.item_masks()]
    return len(set(codes)) == len(codes)


def separates_all(sys: SetSystem) -> bool:
    return is_test_cover(sys, range(len(sys.tests)))


def brute_force_tc(sys: SetSystem, cap: int = TC_BRUTE_CAP) -> Optional[Solution]:
    red, kept = sys.dedup()
    if len(red.tests) > cap:
        raise RefusalError(f"brute force capped at {cap} tests, got {len(red.tests)}")
    masks = np.array(red.item_masks(), dtype=np.int64)
    res = kernels.smallest_separating_family(masks, len(red.tests))
    if res is None:
        return None
    return Solution(tuple(sorted(kept[int(j)] for j in res)))


def greedy_cover(sys: SetSystem) -> Optional[list[int]]:
    """Separating subfamily of at most |U|-1 tests, each one splitting a class."""
    blocks = [list(range(sys.universe_size))] if sys.universe_size else []
    chosen = []
    for j, t in enumerate(sys.tests):
        ts = set(t)
        nxt, split = [], False
        for b in blocks:
            a = [x for x in b if x in ts]
            c = [x for x in b if x not in ts]
            if a and c:
                split = True
            nxt.extend(p for p in (a, c) if p)
        if split:
            chosen.append(j)
            blocks = nxt
    if any(len(b) > 1 for b in blocks):
        return None
    return chosen


def solve_tc(sys: SetSystem, k: int, mode: str = "decide") -> Optional[Solution]:
    if k < 0:
        return None
    red, kept = sys.dedup()
    masks = red.item_masks()
    if sum(1 for m in masks if m == 0) >= 2:
        return None
    if not separates_all(red):
        return None
    nu = red.universe_size
    if k >= nu and mode == "decide":
        picks = greedy_cover(red)
        assert picks is not None and len(picks) <= max(nu - 1, 0)
        return Solution(tuple(sorted(kept[j] for j in picks)))
    g, rs, bs = aux_graph(red)
    q = Partition.of([[r] for r in rs] + [bs])
    best = None
    budget = k
    demands: list[frozenset[int]] = [frozenset(bs)] + [frozenset(bs) - {b} for b in bs]
    for dem in demands:
        inst = RefinementInstance(g, tuple(rs), tuple(bs), q, frozenset(), dem, budget)
        res = solve_instance(inst)
        if res is not None and (best is None or res.value < best.value):
            best = res
            if mode == "decide":
                break
            budget = res.value - 1
            if budget < 0:
                break
    if best is None:
        return None
    witness = tuple(sorted(kept[j] for j in best.witness))
    if not is_test_cover(sys, witness) or len(witness) > k:
        raise AssertionError("test cover solver produced an invalid witness")
    return Solution(witness)


def minimum_tc(sys: SetSystem) -> Optional[Solution]:
    return solve_tc(sys, max(sys.universe_size, 0), mode="optimize")


def bondy_bound(sys: SetSystem) -> int:
    return max(sys.universe_size - 1, 0)


__all__ = [
    "SetSystem",
    "aux_graph",
    "bondy_bound",
    "brute_force_tc",
    "format_set_system",
    "greedy_cover",
    "is_test_cover",
    "minimum_tc",
    "parse_set_system",
    "separates_all",
    "solve_tc",
]
