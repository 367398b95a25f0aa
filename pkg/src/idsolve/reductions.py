"""Red-Blue Dominating Set instances and their reductions to LDS and Test Cover.

Vertex numbering of the LDS output is fixed: R block, then the B pairs
interleaved (b°_1, b*_1, b°_2, ...), then the y pairs (y_{i,1}, y_{i,2}) for
i = 0..q, then the z pairs for i = 0..p. The Test Cover output lists the
r-tests before the connector tests z_{0,1}..z_{p,1}; items are the B pairs,
then z_{0,2}..z_{p,2}, then the isolated item b_0.

Bit i (1-based) of an index l is ``(l >> (i - 1)) & 1``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from . import kernels
from .errors import InputError, RefusalError
from .graph import Graph, Solution
from .testcover import SetSystem

RBDS_BRUTE_CAP = 20


@dataclass(frozen=True)
class RBDSInstance:
    """Bipartite graph with red side ``0..n_red-1`` and blue side ``0..n_blue-1``."""

    n_red: int
    n_blue: int
    edges: tuple[tuple[int, int], ...]
    k: int

    @classmethod
    def of(cls, n_red: int, n_blue: int, edges: Iterable[tuple[int, int]], k: int) -> "RBDSInstance":
        if n_red < 0 or n_blue < 0:
            raise InputError("side sizes must be non-negative")
        es = set()
        for r, b in edges:
            if not (0 <= r < n_red and 0 <= b < n_blue):
                raise InputError(f"edge ({r}, {b}) out of range")
            es.add((int(r), int(b)))
        return cls(n_red, n_blue, tuple(sorted(es)), int(k))

    def red_nbrs(self) -> list[frozenset[int]]:
        out: list[set[int]] = [set() for _ in range(self.n_red)]
        for r, b in self.edges:
            out[r].add(b)
        return [frozenset(s) for s in out]

    @property
    def graph(self) -> Graph:
        return Graph.from_edges(self.n_red + self.n_blue, [(r, self.n_red + b) for r, b in self.edges])

    @property
    def size(self) -> int:
        return self.n_red + self.n_blue


TRIVIAL_NO = "trivial-no"
TRIVIAL_YES = "trivial-yes"


def preprocess_rbds(inst: RBDSInstance) -> Union[RBDSInstance, str]:
    """Clean an instance; returns ``TRIVIAL_NO``/``TRIVIAL_YES`` when decided outright."""
    if inst.k < 0:
        return TRIVIAL_NO
    nbrs = inst.red_nbrs()
    hit = set().union(*nbrs) if nbrs else set()
    if len(hit) < inst.n_blue:
        return TRIVIAL_NO
    kept: list[frozenset[int]] = []
    for s in nbrs:
        if s and s not in kept:
            kept.append(s)
    if inst.k >= len(kept):
        return TRIVIAL_YES
    edges = [(i, b) for i, s in enumerate(kept) for b in s]
    return RBDSInstance.of(len(kept), inst.n_blue, edges, inst.k)


def clog2(x: int) -> int:
    """Ceiling of log2 for x >= 1, with clog2(1) = 0."""
    if x < 1:
        raise ValueError("clog2 needs x >= 1")
    return (x - 1).bit_length()


def bit(l: int, i: int) -> int:
    return (l >> (i - 1)) & 1


def _check_ready(inst: RBDSInstance) -> None:
    if inst.n_red == 0 or inst.n_blue == 0:
        raise InputError("reduction expects a preprocessed instance with both sides non-empty")


def widths(inst: RBDSInstance) -> tuple[int, int]:
    """(q, p) for the two bit representation gadgets."""
    return clog2(inst.n_red) + 1, clog2(inst.n_blue) + 1


def rbds_to_lds(inst: RBDSInstance) -> tuple[Graph, int]:
    _check_ready(inst)
    nr, nb = inst.n_red, inst.n_blue
    q, p = widths(inst)
    b0 = nr
    y0 = b0 + 2 * nb
    z0 = y0 + 2 * (q + 1)
    n = z0 + 2 * (p + 1)
    nbrs = inst.red_nbrs()
    edges = []
    for i in range(q + 1):
        edges.append((y0 + 2 * i, y0 + 2 * i + 1))
    for i in range(p + 1):
        edges.append((z0 + 2 * i, z0 + 2 * i + 1))
    for r in range(nr):
        edges.append((r, y0))
        for i in range(1, q + 1):
            if bit(r + 1, i):
                edges.append((r, y0 + 2 * i))
        for j in range(nb):
            edges.append((r, b0 + 2 * j))
            if j not in nbrs[r]:
                edges.append((r, b0 + 2 * j + 1))
    for j in range(nb):
        for v in (b0 + 2 * j, b0 + 2 * j + 1):
            edges.append((v, z0))
            for i in range(1, p + 1):
                if bit(j + 1, i):
                    edges.append((v, z0 + 2 * i))
    g = Graph.from_edges(n, edges)
    assert n <= nr + 2 * nb + 2 * (q + 1) + 2 * (p + 1)
    k = inst.k + (q + 1) + (p + 1)
    return g, k


def lds_layout(inst: RBDSInstance) -> dict[str, list[int]]:
    """Vertex id groups of the LDS output, for inspection and tests."""
    nr, nb = inst.n_red, inst.n_blue
    q, p = widths(inst)
    b0 = nr
    y0 = b0 + 2 * nb
    z0 = y0 + 2 * (q + 1)
    return {
        "R": list(range(nr)),
        "B": list(range(b0, y0)),
        "bitrep_R": [y0 + 2 * i for i in range(q + 1)],
        "pendants_R": [y0 + 2 * i + 1 for i in range(q + 1)],
        "bitrep_B": [z0 + 2 * i for i in range(p + 1)],
        "pendants_B": [z0 + 2 * i + 1 for i in range(p + 1)],
    }


def rbds_to_tc(inst: RBDSInstance) -> tuple[SetSystem, int]:
    _check_ready(inst)
    nr, nb = inst.n_red, inst.n_blue
    _, p = widths(inst)
    nbrs = inst.red_nbrs()
    pend0 = 2 * nb
    b_zero = pend0 + p + 1
    tests: list[list[int]] = []
    for r in range(nr):
        t = []
        for j in range(nb):
            t.append(2 * j)
            if j not in nbrs[r]:
                t.append(2 * j + 1)
        tests.append(t)
    for i in range(p + 1):
        t = [pend0 + i]
        for j in range(nb):
            if i == 0 or bit(j + 1, i):
                t += [2 * j, 2 * j + 1]
        tests.append(t)
    k = inst.k + (p + 1)
    return SetSystem.of(b_zero + 1, tests), k


def _cover_masks(inst: RBDSInstance) -> np.ndarray:
    out = np.zeros(inst.n_red, dtype=np.int64)
    for r, b in inst.edges:
        out[r] |= 1 << b
    return out


def brute_force_rbds(inst: RBDSInstance, cap: int = RBDS_BRUTE_CAP) -> Optional[Solution]:
    """Minimum red set dominating all blue vertices, or None if none exists."""
    if inst.n_red > cap:
        raise RefusalError(f"brute force capped at {cap} red vertices, got {inst.n_red}")
    res = kernels.smallest_red_cover(_cover_masks(inst), inst.n_blue)
    if res is None:
        return None
    return Solution(tuple(int(r) for r in res))


def greedy_rbds(inst: RBDSInstance) -> Optional[list[int]]:
    nbrs = inst.red_nbrs()
    left = set(range(inst.n_blue))
    out = []
    while left:
        r = max(range(inst.n_red), key=lambda x: (len(nbrs[x] & left), -x), default=None)
        if r is None or not nbrs[r] & left:
            return None
        out.append(r)
        left -= nbrs[r]
    return out


def rbds_decision(inst: RBDSInstance) -> bool:
    sol = brute_force_rbds(inst)
    return sol is not None and sol.size <= inst.k


def random_rbds(max_red: int, max_blue: int, rng: random.Random) -> RBDSInstance:
    nr = rng.randint(1, max_red)
    nb = rng.randint(1, max_blue)
    p = rng.choice([0.3, 0.5, 0.7])
    edges = [(r, b) for r in range(nr) for b in range(nb) if rng.random() < p]
    for b in range(nb):
        if not any(e[1] == b for e in edges):
            edges.append((rng.randrange(nr), b))
    return RBDSInstance.of(nr, nb, edges, rng.randint(0, max(nr - 1, 0)))


__all__ = [
    "RBDSInstance",
    "TRIVIAL_NO",
    "TRIVIAL_YES",
    "bit",
    "brute_force_rbds",
    "clog2",
    "greedy_rbds",
    "lds_layout",
    "preprocess_rbds",
    "random_rbds",
    "rbds_decision",
    "rbds_to_lds",
    "rbds_to_tc",
    "widths",
]
