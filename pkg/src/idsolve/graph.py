"""Graphs, partitions, twins, locating-domination checks and brute-force oracles.

Vertex sets inside hot loops are Python ints used as bitsets (bit ``v`` set
means vertex ``v`` is in the set). Python ints grow as needed so there is no
fixed width; public functions accept any iterable of ids and return sorted
tuples.
"""

from __future__ import annotations

import re

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import InputError, RefusalError

BRUTE_FORCE_CAP = 20


def bits(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# ---------------------------------------------------------------------------
# Graph


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    adj: tuple[tuple[int, ...], ...]
    _masks: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        if n < 0:
            raise InputError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        adj = tuple(tuple(sorted(s)) for s in nbrs)
        return cls(n, adj, tuple(bits(a) for a in adj))

    def __post_init__(self):
        if not self._masks:
            object.__setattr__(self, "_masks", tuple(bits(a) for a in self.adj))

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._masks[u] >> v) & 1)

    def nbr_mask(self, v: int) -> int:
        return self._masks[v]

    def closed_mask(self, v: int) -> int:
        return self._masks[v] | (1 << v)

    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def induced(self, keep: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled densely; returns it with new->old ids."""
        old = sorted(set(keep))
        pos = {v: i for i, v in enumerate(old)}
        edges = [(pos[u], pos[v]) for u, v in self.edges() if u in pos and v in pos]
        return Graph.from_edges(len(old), edges), old

    def without(self, drop: Iterable[int]) -> tuple["Graph", list[int]]:
        dropped = set(drop)
        return self.induced(v for v in range(self.n) if v not in dropped)

    def complement(self) -> "Graph":
        return Graph.from_edges(
            self.n,
            [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if not self.has_edge(u, v)],
        )

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise InputError(f"vertex {v} out of range for n={self.n}")


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [], [s]
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(sorted(comp))
    return out


def feedback_edge_number(g: Graph) -> int:
    return g.m - g.n + len(components(g))


# ---------------------------------------------------------------------------
# text format


def _column(raw: str, index: int) -> int:
    """1-based column of the ``index``-th whitespace-separated field."""
    spans = [m.start() + 1 for m in re.finditer(r"\S+", raw)]
    return spans[index] if index < len(spans) else len(raw) + 1


def int_field(raw: str, parts: list[str], index: int, lineno: int) -> int:
    if index >= len(parts):
        raise InputError(f"line {lineno}, column {len(raw) + 1}: missing field")
    try:
        return int(parts[index])
    except ValueError:
        raise InputError(
            f"line {lineno}, column {_column(raw, index)}: expected an integer, got {parts[index]!r}"
        ) from None


def parse_graph(text: str) -> Graph:
    n = None
    declared_m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise InputError(f"line {lineno}, column 1: duplicate header")
            if len(parts) < 3:
                raise InputError(f"line {lineno}, column {len(raw) + 1}: header needs 'p <n> <m>'")
            n = int_field(raw, parts, len(parts) - 2, lineno)
            declared_m = int_field(raw, parts, len(parts) - 1, lineno)
            if n < 0:
                raise InputError(f"line {lineno}, column {_column(raw, len(parts) - 2)}: negative vertex count")
        elif parts[0] == "e":
            if n is None:
                raise InputError(f"line {lineno}, column 1: edge before header")
            u, v = int_field(raw, parts, 1, lineno), int_field(raw, parts, 2, lineno)
            for idx, x in ((1, u), (2, v)):
                if not 1 <= x <= n:
                    raise InputError(f"line {lineno}, column {_column(raw, idx)}: vertex {x} out of range 1..{n}")
            if u == v:
                raise InputError(f"line {lineno}, column 1: self-loop on vertex {u}")
            edges.append((u - 1, v - 1))
        else:
            raise InputError(f"line {lineno}, column {_column(raw, 0)}: unknown record {parts[0]!r}")
    if n is None:
        raise InputError("missing 'p <n> <m>' header")
    g = Graph.from_edges(n, edges)
    if declared_m is not None and len(edges) != declared_m:
        raise InputError(f"header declares {declared_m} edges, found {len(edges)}")
    if g.m != len(edges):
        raise InputError("duplicate edges in input")
    return g


def format_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph(g, comments))


# ---------------------------------------------------------------------------
# Partition


@dataclass(frozen=True)
class Partition:
    """Canonical partition: sorted blocks ordered by their minimum."""

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "Partition":
        bl = [tuple(sorted(b)) for b in blocks]
        bl = [b for b in bl if b]
        seen: set[int] = set()
        for b in bl:
            if seen.intersection(b):
                raise InputError("partition blocks overlap")
            seen.update(b)
        bl.sort(key=lambda b: b[0])
        return cls(tuple(bl))

    @classmethod
    def identity(cls, ground: Iterable[int]) -> "Partition":
        return cls(tuple((v,) for v in sorted(set(ground))))

    @classmethod
    def whole(cls, ground: Iterable[int]) -> "Partition":
        g = tuple(sorted(set(ground)))
        return cls((g,) if g else ())

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(v for b in self.blocks for v in b)

    def is_identity(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def block_of(self) -> dict[int, int]:
        return {v: i for i, b in enumerate(self.blocks) for v in b}

    def restrict(self, sub: Iterable[int]) -> "Partition":
        keep = set(sub)
        return Partition.of([v for v in b if v in keep] for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


def meet(p: Partition, q: Partition) -> Partition:
    if p.ground != q.ground:
        raise InputError("meet needs partitions of the same ground set")
    where = q.block_of()
    out = []
    for b in p.blocks:
        groups: dict[int, list[int]] = defaultdict(list)
        for v in b:
            groups[where[v]].append(v)
        out.extend(groups.values())
    return Partition.of(out)


def induced_partition(ground: Iterable[int], c: Iterable[int], g: Graph) -> Partition:
    ground = sorted(set(ground))
    cm = bits(c)
    out: list[list[int]] = []
    groups: dict[int, list[int]] = defaultdict(list)
    for v in ground:
        if (cm >> v) & 1:
            out.append([v])
        else:
            groups[g.nbr_mask(v) & cm].append(v)
    out.extend(groups.values())
    return Partition.of(out)


# ---------------------------------------------------------------------------
# locating domination


def is_locating_dominating(g: Graph, s: Iterable[int]) -> bool:
    s = list(s)
    for v in s:
        g.check_vertex(v)
    sm = bits(s)
    seen = set()
    for v in range(g.n):
        if (sm >> v) & 1:
            continue
        code = g.nbr_mask(v) & sm
        if code == 0 or code in seen:
            return False
        seen.add(code)
    return True


def separates(g: Graph, s: Iterable[int]) -> bool:
    """Distinct codes outside ``s``, without the domination requirement."""
    sm = bits(s)
    codes = [g.nbr_mask(v) & sm for v in range(g.n) if not (sm >> v) & 1]
    return len(set(codes)) == len(codes)


# ---------------------------------------------------------------------------
# twins


def twin_classes(g: Graph) -> Partition:
    """False-twin classes first, then true-twin classes among the rest."""
    return Partition.of(_twin_groups(g)[0])


def twin_kinds(g: Graph) -> dict[tuple[int, ...], str]:
    blocks, kinds = _twin_groups(g)
    return {tuple(sorted(b)): k for b, k in zip(blocks, kinds)}


def _twin_groups(g: Graph):
    by_open: dict[int, list[int]] = defaultdict(list)
    for v in range(g.n):
        by_open[g.nbr_mask(v)].append(v)
    blocks, kinds, rest = [], [], []
    for grp in by_open.values():
        if len(grp) > 1:
            blocks.append(grp)
            kinds.append("false")
        else:
            rest.extend(grp)
    by_closed: dict[int, list[int]] = defaultdict(list)
    for v in rest:
        by_closed[g.closed_mask(v)].append(v)
    for grp in by_closed.values():
        blocks.append(grp)
        kinds.append("true" if len(grp) > 1 else "single")
    return blocks, kinds


@dataclass
class TwinTrace:
    """Deleted original ids, and original ids of the surviving vertices."""

    deleted: list[int]
    kept: list[int]

    def lift(self, solution: Iterable[int]) -> list[int]:
        """Map a solution of the reduced graph back and re-add deleted twins."""
        return sorted({self.kept[v] for v in solution} | set(self.deleted))


def apply_twin_rule(g: Graph, k: int) -> tuple[Graph, int, TwinTrace]:
    """Delete twins while some twin class has at least three members."""
    alive = list(range(g.n))
    cur = g
    deleted: list[int] = []
    while True:
        drop = [v for b in twin_classes(cur).blocks if len(b) > 2 for v in b[2:]]
        if not drop:
            break
        deleted.extend(alive[v] for v in drop)
        k -= len(drop)
        cur, keep = cur.without(drop)
        alive = [alive[v] for v in keep]
    return cur, k, TwinTrace(sorted(deleted), alive)


def twin_seeds(g: Graph) -> list[int]:
    """Smallest member of every size-2 twin class; some optimum contains them all."""
    return sorted(b[0] for b in twin_classes(g).blocks if len(b) == 2)


# ---------------------------------------------------------------------------
# oracles


@dataclass(frozen=True)
class Solution:
    vertices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


def brute_force_lds(g: Graph, cap: int = BRUTE_FORCE_CAP) -> Solution:
    if g.n > cap:
        raise RefusalError(f"brute force capped at {cap} vertices, got {g.n}")
    closed = np.array([g.closed_mask(v) for v in range(g.n)], dtype=np.int64)
    opened = np.array([g.nbr_mask(v) for v in range(g.n)], dtype=np.int64)
    res = kernels.smallest_lds(closed, opened)
    return Solution(tuple(int(v) for v in res))


def lds_number(g: Graph, cap: int = BRUTE_FORCE_CAP) -> int:
    return brute_force_lds(g, cap).size
