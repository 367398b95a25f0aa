"""Linear kernel for locating-dominating set parameterized by feedback edge set.

Two replacement rules run on top of the graph's 2-core structure:

1. every hanging tree (T, v) is swapped for the fixed rooted gadget of its
   class, shifting the budget by k_X - t;
2. every tree hanging between two core vertices (one per edge of the core
   multigraph) is swapped for the smallest doubly-rooted tree of the same
   class, taken from a precomputed gadget library.
"""

from __future__ import annotations

import hashlib
import heapq
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import InputError, RefusalError
from .graph import Graph, feedback_edge_number
from .trees import (
    RootedTree,
    ahu,
    canonical_relabel,
    classify_doubly,
    classify_rooted,
    doubly_rooted_trees,
    rooted_gadget,
)

DEFAULT_MAX_N = 10
LIBRARY_ENV = "IDSOLVE_GADGETS"


class GadgetGap(RefusalError):
    """A doubly-rooted class has no representative in the loaded library."""

    def __init__(self, signature: str):
        super().__init__(f"no gadget for class {signature}")
        self.signature = signature


# ---------------------------------------------------------------------------
# mutable working graph


class _Work:
    def __init__(self, g: Graph):
        self.adj: dict[int, set[int]] = {v: set(g.adj[v]) for v in range(g.n)}
        self.next_id = g.n

    def remove(self, vs) -> None:
        for v in vs:
            for w in self.adj.pop(v):
                if w in self.adj:
                    self.adj[w].discard(v)

    def graft(self, t: RootedTree, attach: dict[int, int]) -> list[int]:
        """Copy tree ``t`` in, identifying gadget vertex i with attach[i]."""
        ids = {}
        for i in range(t.n):
            if i in attach:
                ids[i] = attach[i]
            else:
                ids[i] = self.next_id
                self.adj[self.next_id] = set()
                self.next_id += 1
        for u, v in t.tree.edges():
            a, b = ids[u], ids[v]
            self.adj[a].add(b)
            self.adj[b].add(a)
        return [ids[i] for i in range(t.n) if i not in attach]

    def freeze(self) -> tuple[Graph, list[int]]:
        old = sorted(self.adj)
        pos = {v: i for i, v in enumerate(old)}
        edges = [(pos[u], pos[v]) for u in old for v in self.adj[u] if u < v]
        return Graph.from_edges(len(old), edges), old


def _as_graph(adj: dict[int, set[int]], vs) -> tuple[Graph, list[int]]:
    old = sorted(vs)
    pos = {v: i for i, v in enumerate(old)}
    edges = [(pos[u], pos[v]) for u in old for v in adj[u] if v in pos and u < v]
    return Graph.from_edges(len(old), edges), old


# ---------------------------------------------------------------------------
# hanging trees


@dataclass
class HangingTree:
    """A tree attached through ``anchor``; ``vertices`` includes the anchor."""

    anchor: int
    vertices: list[int]
    rooted: RootedTree
    ids: list[int]  # rooted-tree vertex -> graph vertex

    def __iter__(self):
        return iter((self.rooted, self.anchor))


def _peel(adj: dict[int, set[int]]) -> set[int]:
    deg = {v: len(ns) for v, ns in adj.items()}
    heap = [v for v, d in deg.items() if d == 1]
    heapq.heapify(heap)
    marked: set[int] = set()
    while heap:
        v = heapq.heappop(heap)
        if v in marked or deg[v] != 1:
            continue
        marked.add(v)
        for w in adj[v]:
            if w not in marked:
                deg[w] -= 1
                if deg[w] == 1:
                    heapq.heappush(heap, w)
    return marked


def _hanging(adj: dict[int, set[int]]) -> tuple[list[HangingTree], set[int]]:
    marked = _peel(adj)
    groups: dict[int, list[int]] = {}
    seen: set[int] = set()
    for s in sorted(marked):
        if s in seen:
            continue
        comp, stack, anchor = [], [s], None
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w in marked:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
                else:
                    anchor = w
        if anchor is None:  # cannot happen: peeling leaves one vertex per tree
            raise AssertionError("marked component without anchor")
        groups.setdefault(anchor, []).extend(comp)
    out = []
    for anchor in sorted(groups):
        vs = [anchor] + sorted(groups[anchor])
        g, old = _as_graph(adj, vs)
        out.append(HangingTree(anchor, sorted(vs), RootedTree(g, old.index(anchor)), old))
    return out, marked


def find_hanging_trees(g: Graph) -> list[HangingTree]:
    return _hanging({v: set(g.adj[v]) for v in range(g.n)})[0]


def _apply_rule2(work: _Work, k: int, ht: HangingTree) -> tuple[int, bool]:
    letter, t0 = classify_rooted(ht.rooted)
    gadget, kx = rooted_gadget(letter)
    if ahu(ht.rooted.tree, ht.rooted.root) == ahu(gadget.tree, gadget.root):
        return k, False
    work.remove(v for v in ht.vertices if v != ht.anchor)
    work.graft(gadget, {gadget.root: ht.anchor})
    return k - t0 + kx, True


def reduce_hanging_tree(g: Graph, k: int, t: HangingTree) -> tuple[Graph, int]:
    work = _Work(g)
    k2, _ = _apply_rule2(work, k, t)
    return work.freeze()[0], k2


# ---------------------------------------------------------------------------
# core multigraph


@dataclass
class CoreEdge:
    x: int
    y: int
    path: list[int]  # interior vertices from the x side to the y side
    tree: list[int] = field(default_factory=list)  # path plus hanging vertices

    @property
    def direct(self) -> bool:
        return not self.path


@dataclass
class CoreMultigraph:
    vertices: list[int]
    edges: list[CoreEdge]
    fes: int
    component_fes: dict[int, int]  # min vertex of component -> its fes

    def check_bounds(self) -> None:
        by_comp_v: dict[int, int] = {}
        by_comp_e: dict[int, int] = {}
        for v in self.vertices:
            r = self._root[v]
            by_comp_v[r] = by_comp_v.get(r, 0) + 1
        for e in self.edges:
            r = self._root[e.x]
            by_comp_e[r] = by_comp_e.get(r, 0) + 1
        for r, f in self.component_fes.items():
            if f == 0:
                continue
            if by_comp_v.get(r, 0) > max(3 * f - 2, 2) or by_comp_e.get(r, 0) > max(4 * f - 3, 2):
                raise AssertionError(f"core of component {r} exceeds its size bounds")

    _root: dict[int, int] = field(default_factory=dict, repr=False)


def _core(adj: dict[int, set[int]]) -> CoreMultigraph:
    _, marked = _hanging(adj)
    core = [v for v in sorted(adj) if v not in marked]
    cset = set(core)
    cdeg = {v: sum(1 for w in adj[v] if w in cset) for v in core}
    tilde = {v for v in core if cdeg[v] >= 3}
    # per-component bookkeeping
    root: dict[int, int] = {}
    comp_fes: dict[int, int] = {}
    for s in sorted(adj):
        if s in root:
            continue
        comp, stack = [], [s]
        root[s] = s
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in root:
                    root[w] = s
                    stack.append(w)
        m = sum(len(adj[u]) for u in comp) // 2
        comp_fes[s] = m - len(comp) + 1
        cyc = [v for v in comp if v in cset]
        if cyc and comp_fes[s] > 0 and not any(v in tilde for v in cyc):
            tilde.add(min(cyc))
    edges = _trace(adj, cset, tilde)
    while True:
        loops = [e for e in edges if e.x == e.y]
        if not loops:
            break
        for e in loops:
            tilde.add(e.path[(len(e.path) - 1) // 2])
        edges = _trace(adj, cset, tilde)
    # attach hanging vertices to the edge whose path holds their anchor
    hang, _ = _hanging(adj)
    by_anchor = {h.anchor: h.vertices for h in hang}
    for e in edges:
        tv = set(e.path)
        for p in e.path:
            tv.update(by_anchor.get(p, ()))
        e.tree = sorted(tv)
    fes = sum(comp_fes.values())
    cm = CoreMultigraph(sorted(tilde), edges, fes, comp_fes)
    cm._root = root
    return cm


def _trace(adj, cset, tilde) -> list[CoreEdge]:
    edges = []
    used_interior: set[int] = set()
    used_direct: set[tuple[int, int]] = set()
    for x in sorted(tilde):
        for start in sorted(w for w in adj[x] if w in cset):
            if start in tilde:
                key = (min(x, start), max(x, start))
                if key not in used_direct:
                    used_direct.add(key)
                    edges.append(CoreEdge(x, start, []))
                continue
            if start in used_interior:
                continue
            path = [start]
            prev, cur = x, start
            while True:
                nxt = [w for w in adj[cur] if w in cset and w != prev]
                # a degree-2 core vertex has exactly one onward neighbour
                w = nxt[0]
                if w in tilde:
                    break
                path.append(w)
                prev, cur = cur, w
            used_interior.update(path)
            edges.append(CoreEdge(x, w, path))
    return edges


def core_multigraph(g: Graph) -> CoreMultigraph:
    cm = _core({v: set(g.adj[v]) for v in range(g.n)})
    cm.check_bounds()
    return cm


# ---------------------------------------------------------------------------
# gadget library


@dataclass
class GadgetEntry:
    signature: str
    k: int
    tree: RootedTree


@dataclass
class GadgetLibrary:
    max_n: int
    entries: dict[str, GadgetEntry]

    def __contains__(self, sig: str) -> bool:
        return sig in self.entries

    def __getitem__(self, sig: str) -> GadgetEntry:
        return self.entries[sig]

    def __len__(self) -> int:
        return len(self.entries)

    def body(self) -> str:
        lines = []
        for sig in sorted(self.entries):
            e = self.entries[sig]
            edges = ";".join(f"{u}-{v}" for u, v in e.tree.tree.edges())
            lines.append(f"g {sig} k={e.k} roots={e.tree.root},{e.tree.root2} edges={edges}")
        return "\n".join(lines) + ("\n" if lines else "")

    def dumps(self) -> str:
        body = self.body()
        digest = hashlib.sha256(body.encode()).hexdigest()
        return f"gadgetlib v1 max_n={self.max_n} count={len(self.entries)} checksum={digest}\n" + body

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")


def parse_library(text: str) -> GadgetLibrary:
    head, _, body = text.partition("\n")
    parts = head.split()
    if len(parts) != 5 or parts[0] != "gadgetlib" or parts[1] != "v1":
        raise InputError("not a gadget library file")
    fields = dict(p.split("=", 1) for p in parts[2:])
    if hashlib.sha256(body.encode()).hexdigest() != fields["checksum"]:
        raise InputError("gadget library checksum mismatch")
    entries = {}
    for line in body.splitlines():
        if not line.strip():
            continue
        tok = line.split()
        sig = tok[1]
        kv = dict(t.split("=", 1) for t in tok[2:])
        r1, r2 = (int(x) for x in kv["roots"].split(","))
        es = [tuple(int(x) for x in e.split("-")) for e in kv["edges"].split(";") if e]
        n = 1 + max(max(e) for e in es) if es else 1
        t = RootedTree(Graph.from_edges(n, es), r1, r2)
        entries[sig] = GadgetEntry(sig, int(kv["k"]), t)
    if len(entries) != int(fields["count"]):
        raise InputError("gadget library entry count mismatch")
    return GadgetLibrary(int(fields["max_n"]), entries)


def discover_gadgets(max_n: int) -> GadgetLibrary:
    """Smallest, then canonically first, doubly-rooted tree per class."""
    if max_n < 2:
        raise InputError("max_n must be at least 2")
    entries: dict[str, GadgetEntry] = {}
    for n in range(2, max_n + 1):
        found = []
        for t in doubly_rooted_trees(n):
            sig, k = classify_doubly(t)
            if sig not in entries:
                found.append((sig, ahu(t.tree, t.root, t.root2), k, t))
        found.sort(key=lambda x: (x[0], x[1]))
        for sig, _, k, t in found:
            if sig not in entries:
                entries[sig] = GadgetEntry(sig, k, canonical_relabel(t))
    return GadgetLibrary(max_n, entries)


def default_library_path() -> Path:
    env = os.environ.get(LIBRARY_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("idsolve") / "data" / f"gadgets_n{DEFAULT_MAX_N}.txt"))


_LIB_CACHE: dict[str, GadgetLibrary] = {}


def load_library(path=None) -> GadgetLibrary:
    p = Path(path) if path is not None else default_library_path()
    key = str(p.resolve())
    if key not in _LIB_CACHE:
        _LIB_CACHE[key] = parse_library(p.read_text(encoding="utf-8"))
    return _LIB_CACHE[key]


# ---------------------------------------------------------------------------
# kernel


def _edge_tree(adj, e: CoreEdge) -> RootedTree:
    g, old = _as_graph(adj, e.tree)
    return RootedTree(g, old.index(e.path[0]), old.index(e.path[-1]))


def _apply_rule3(work: _Work, k: int, e: CoreEdge, lib: GadgetLibrary) -> tuple[int, bool]:
    t = _edge_tree(work.adj, e)
    sig, t0 = classify_doubly(t)
    if sig not in lib:
        raise GadgetGap(sig)
    gadget = lib[sig]
    if ahu(t.tree, t.root, t.root2) == ahu(gadget.tree.tree, gadget.tree.root, gadget.tree.root2):
        return k, False
    c1, c2 = e.path[0], e.path[-1]
    work.remove(v for v in e.tree if v not in (c1, c2))
    # an edge c1-c2 belongs to T and goes with it
    work.adj[c1].discard(c2)
    work.adj[c2].discard(c1)
    work.graft(gadget.tree, {gadget.tree.root: c1, gadget.tree.root2: c2})
    return k - t0 + gadget.k, True


def reduce_core_edge(g: Graph, k: int, e: CoreEdge, lib: GadgetLibrary) -> tuple[Graph, int]:
    work = _Work(g)
    k2, _ = _apply_rule3(work, k, e, lib)
    return work.freeze()[0], k2


@dataclass
class KernelReport:
    fes: int
    n_in: int
    n_kernel: int
    m_kernel: int
    hanging_replaced: int = 0
    edges_replaced: int = 0
    gaps: list[str] = field(default_factory=list)

    @property
    def ratio(self) -> float:
        return self.n_kernel / max(self.fes, 1)

    def as_dict(self) -> dict:
        return {
            "fes": self.fes,
            "n_in": self.n_in,
            "n_kernel": self.n_kernel,
            "m_kernel": self.m_kernel,
            "ratio": self.ratio,
            "hanging_replaced": self.hanging_replaced,
            "edges_replaced": self.edges_replaced,
            "gaps": list(self.gaps),
        }


def kernelize_fes(g: Graph, k: int, lib: Optional[GadgetLibrary] = None, strict: bool = False):
    """Apply both rules; returns (kernel, k', report).

    An edge whose class is missing from the library is left as it is and
    listed in ``report.gaps``; with ``strict=True`` the gap is raised instead.
    """
    lib = load_library() if lib is None else lib
    work = _Work(g)
    report = KernelReport(feedback_edge_number(g), g.n, 0, 0)
    hang, _ = _hanging(work.adj)
    for ht in hang:
        k, done = _apply_rule2(work, k, ht)
        report.hanging_replaced += done
    cm = _core(work.adj)
    for e in cm.edges:
        if len(e.path) < 2:
            continue
        try:
            k, done = _apply_rule3(work, k, e, lib)
        except GadgetGap as gap:
            if strict:
                raise
            report.gaps.append(gap.signature)
            continue
        report.edges_replaced += done
    kernel, _ = work.freeze()
    report.n_kernel, report.m_kernel = kernel.n, kernel.m
    return kernel, k, report


def kernel_dot(g: Graph) -> str:
    lines = ["graph kernel {"]
    lines += [f"  {v};" for v in range(g.n) if not g.adj[v]]
    lines += [f"  {u} -- {v};" for u, v in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "CoreEdge",
    "CoreMultigraph",
    "GadgetEntry",
    "GadgetGap",
    "GadgetLibrary",
    "HangingTree",
    "KernelReport",
    "core_multigraph",
    "default_library_path",
    "discover_gadgets",
    "find_hanging_trees",
    "kernel_dot",
    "kernelize_fes",
    "load_library",
    "parse_library",
    "reduce_core_edge",
    "reduce_hanging_tree",
]
