"""Rooted tree types A..E, doubly-rooted types (X, Y) and tree classes.

For a tree T rooted at v, a set L ⊆ V(T) has

* type A: L dominates and locates every vertex except v,
* type B: as A, and v is dominated too,
* type C: L is a locating-dominating set of T,
* type D: as C, and v ∈ L,
* type E: as D, and no vertex w outside L has N(w) ∩ L = {v}.

opt_X(T, v) is the smallest size of a type-X set. With two roots, type
(X, Y) asks for type X with respect to v1 and type Y with respect to v2,
where each side ignores the other root entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import networkx as nx
import numpy as np

from . import kernels
from .errors import InputError
from .graph import Graph

LETTERS = "ABCDE"


@dataclass(frozen=True)
class RootedTree:
    tree: Graph
    root: int
    root2: Optional[int] = None

    def __post_init__(self):
        g = self.tree
        if g.n == 0 or g.m != g.n - 1 or not _connected(g):
            raise InputError("not a tree")
        g.check_vertex(self.root)
        if self.root2 is not None:
            g.check_vertex(self.root2)
            if self.root2 == self.root:
                raise InputError("the two roots must differ")

    @property
    def n(self) -> int:
        return self.tree.n

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        adj = self.tree.adj
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in adj])
        indices = np.array([w for a in adj for w in a], dtype=np.int64)
        return indptr, indices


def _connected(g: Graph) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def tree(n: int, edges, root: int = 0, root2: Optional[int] = None) -> RootedTree:
    return RootedTree(Graph.from_edges(n, edges), root, root2)


# ---------------------------------------------------------------------------
# type optima


def _table(t: RootedTree, v2: int) -> np.ndarray:
    indptr, indices = t.csr()
    return kernels.tree_type_table(indptr, indices, t.n, t.root, v2)


def opt_rooted(t: RootedTree) -> tuple[int, ...]:
    """(opt_A, ..., opt_E) for the first root."""
    return tuple(int(x) for x in _table(t, -1)[:, 0])


def opt_doubly(t: RootedTree) -> tuple[int, ...]:
    """25 values opt_{X,Y}, X-major (AA, AB, ..., AE, BA, ..., EE)."""
    if t.root2 is None:
        raise InputError("doubly-rooted tree needs a second root")
    return tuple(int(x) for x in _table(t, t.root2).ravel())


def _adj_masks(t: RootedTree) -> np.ndarray:
    return np.array([t.tree.nbr_mask(v) for v in range(t.n)], dtype=np.int64)


def brute_opt_rooted(t: RootedTree) -> tuple[int, ...]:
    return tuple(int(x) for x in kernels.brute_type_table(_adj_masks(t), t.root, -1)[:, 0])


def brute_opt_doubly(t: RootedTree) -> tuple[int, ...]:
    if t.root2 is None:
        raise InputError("doubly-rooted tree needs a second root")
    return tuple(int(x) for x in kernels.brute_type_table(_adj_masks(t), t.root, t.root2).ravel())


def is_type(t: RootedTree, level: int, members_) -> bool:
    """Direct check of the single-rooted definitions (used in tests)."""
    return _side_ok(t.tree, set(members_), level, t.root, None)


def is_double_type(t: RootedTree, x: int, y: int, members_) -> bool:
    s = set(members_)
    return _side_ok(t.tree, s, x, t.root, t.root2) and _side_ok(t.tree, s, y, t.root2, t.root)


def _side_ok(g: Graph, s: set, level: int, v: int, other: Optional[int]) -> bool:
    if level >= 3 and v not in s:
        return False
    codes = []
    for w in range(g.n):
        if w == other:
            continue
        code = frozenset(x for x in g.adj[w] if x in s)
        if w in s:
            continue
        if not (w == v and level == 0) and not code:
            return False
        if level == 4 and code == {v}:
            return False
        if w == v and level <= 1:
            continue
        codes.append(code)
    return len(set(codes)) == len(codes)


# ---------------------------------------------------------------------------
# classes


def classify_rooted(t: RootedTree) -> tuple[str, int]:
    vals = opt_rooted(t)
    k = vals[0]
    top = max(i for i, x in enumerate(vals) if x == k)
    if any(x != k + 1 for x in vals[top + 1:]):
        raise AssertionError(f"type vector {vals} is not of threshold shape")
    return LETTERS[top], k


def signature(vals) -> str:
    base = vals[0]
    digits = [x - base for x in vals]
    if any(d < 0 or d > 2 for d in digits):
        raise AssertionError(f"type vector {vals} leaves the range base..base+2")
    return "".join(str(d) for d in digits)


def classify_doubly(t: RootedTree) -> tuple[str, int]:
    vals = opt_doubly(t)
    return signature(vals), vals[0]


def transpose_signature(sig: str) -> str:
    return "".join(sig[5 * y + x] for x in range(5) for y in range(5))


def single_bounded(vals) -> bool:
    return all(a <= b for a, b in zip(vals, vals[1:])) and vals[-1] - vals[0] <= 1


def double_bounded(vals) -> bool:
    m = [vals[5 * x: 5 * x + 5] for x in range(5)]
    for x in range(5):
        for y in range(5):
            if x + 1 < 5 and not 0 <= m[x + 1][y] - m[x][y] <= 1:
                return False
            if y + 1 < 5 and not 0 <= m[x][y + 1] - m[x][y] <= 1:
                return False
            if x + 1 < 5 and y + 1 < 5 and not 0 <= m[x + 1][y + 1] - m[x][y] <= 2:
                return False
    return True


# ---------------------------------------------------------------------------
# the five rooted gadgets, values (opt_A..opt_E) on their own roots

GADGET_VALUES = {
    "A": (tree(1, []), (0, 1, 1, 1, 1)),
    "B": (tree(3, [(0, 1), (1, 2)]), (1, 1, 2, 2, 2)),
    "C": (tree(5, [(0, 1), (1, 2), (0, 3), (3, 4)]), (2, 2, 2, 3, 3)),
    "D": (tree(2, [(0, 1)]), (1, 1, 1, 1, 2)),
    "E": (tree(6, [(0, 1), (1, 2), (0, 3), (3, 4), (4, 5)]), (3, 3, 3, 3, 3)),
}


def rooted_gadget(letter: str) -> tuple[RootedTree, int]:
    """(T_X, v_X) and k_X = opt_X(T_X, v_X)."""
    t, vals = GADGET_VALUES[letter]
    return t, vals[LETTERS.index(letter)]


def check_gadget_values() -> dict[str, tuple[int, ...]]:
    """Recompute every gadget's values; raises if any differs from the table."""
    out = {}
    for letter, (t, vals) in GADGET_VALUES.items():
        got = opt_rooted(t)
        if got != vals:
            raise AssertionError(f"gadget {letter}: expected {vals}, computed {got}")
        out[letter] = got
    return out


# ---------------------------------------------------------------------------
# enumeration and canonical forms


def free_trees(n: int) -> Iterator[Graph]:
    """All non-isomorphic trees on n vertices."""
    if n <= 0:
        return
    if n == 1:
        yield Graph.from_edges(1, [])
        return
    for t in nx.nonisomorphic_trees(n):
        yield Graph.from_edges(n, t.edges())


def ahu(g: Graph, root: int, mark: Optional[int] = None) -> str:
    """Canonical string of a tree rooted at ``root``; ``mark`` is bracketed differently."""
    parent = {root: -1}
    order = [root]
    for u in order:
        for w in g.adj[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
    code: dict[int, str] = {}
    for u in reversed(order):
        kids = sorted(code[w] for w in g.adj[u] if parent.get(w) == u)
        o, c = ("[", "]") if u == mark else ("(", ")")
        code[u] = o + "".join(kids) + c
    return code[root]


def rooted_trees(n: int) -> Iterator[RootedTree]:
    """Non-isomorphic rooted trees on n vertices."""
    for g in free_trees(n):
        seen = set()
        for v in range(n):
            key = ahu(g, v)
            if key not in seen:
                seen.add(key)
                yield RootedTree(g, v)


def doubly_rooted_trees(n: int) -> Iterator[RootedTree]:
    """Non-isomorphic trees with an ordered pair of distinct roots."""
    for g in free_trees(n):
        seen = set()
        for v1 in range(n):
            for v2 in range(n):
                if v1 == v2:
                    continue
                key = ahu(g, v1, v2)
                if key not in seen:
                    seen.add(key)
                    yield RootedTree(g, v1, v2)


def canonical_relabel(t: RootedTree) -> RootedTree:
    """Relabel in BFS order from the first root, children by canonical code."""
    g = t.tree
    mark = t.root2
    parent = {t.root: -1}
    order = [t.root]
    for u in order:
        for w in g.adj[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
    code: dict[int, str] = {}
    for u in reversed(order):
        kids = sorted(code[w] for w in g.adj[u] if parent.get(w) == u)
        o, c = ("[", "]") if u == mark else ("(", ")")
        code[u] = o + "".join(kids) + c
    new = [t.root]
    for u in new:
        kids = sorted((w for w in g.adj[u] if parent.get(w) == u), key=lambda w: code[w])
        new.extend(kids)
    pos = {v: i for i, v in enumerate(new)}
    edges = sorted(tuple(sorted((pos[u], pos[v]))) for u, v in g.edges())
    r2 = None if mark is None else pos[mark]
    return RootedTree(Graph.from_edges(g.n, edges), 0, r2)


__all__ = [
    "LETTERS",
    "RootedTree",
    "GADGET_VALUES",
    "ahu",
    "brute_opt_doubly",
    "brute_opt_rooted",
    "canonical_relabel",
    "check_gadget_values",
    "classify_doubly",
    "classify_rooted",
    "double_bounded",
    "doubly_rooted_trees",
    "free_trees",
    "is_double_type",
    "is_type",
    "opt_doubly",
    "opt_rooted",
    "rooted_gadget",
    "rooted_trees",
    "signature",
    "single_bounded",
    "transpose_signature",
    "tree",
]
