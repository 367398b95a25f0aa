"""Exact locating-dominating set solvers for structural parameters.

All four solvers share one pipeline: the twin rule, one seed per remaining
twin pair, a modulator U whose complement R is structurally simple, a loop
over the part X_L of the solution inside U, and the refinement engine for the
part inside R.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .errors import InputError, RefusalError
from .graph import (
    BRUTE_FORCE_CAP,
    Graph,
    Partition,
    Solution,
    TwinTrace,
    apply_twin_rule,
    bits,
    brute_force_lds,
    induced_partition,
    is_locating_dominating,
    members,
    twin_classes,
    twin_kinds,
    twin_seeds,
)
from .refinement import RefinementInstance, solve_instance

KINDS = ("vc", "tc", "dc", "nd")


@dataclass(frozen=True)
class StructuralDecomposition:
    kind: str
    modulator: frozenset[int]
    rest: frozenset[int]
    classes: Optional[Partition] = None

    def check(self, g: Graph) -> bool:
        rest = sorted(self.rest)
        if self.kind == "vertex-cover":
            return all(not g.has_edge(u, v) for u, v in combinations(rest, 2))
        if self.kind == "distance-to-clique":
            return all(g.has_edge(u, v) for u, v in combinations(rest, 2))
        if self.kind == "twin-cover":
            return all(
                g.closed_mask(u) == g.closed_mask(v)
                for u, v in combinations(rest, 2)
                if g.has_edge(u, v)
            ) and _components_are_cliques(g, rest)
        if self.kind == "nd-classes":
            return self.classes is not None
        raise InputError(f"unknown decomposition kind {self.kind!r}")


def _components_are_cliques(g: Graph, rest) -> bool:
    sub, _ = g.induced(rest)
    for u in range(sub.n):
        for v in sub.adj[u]:
            if sub.closed_mask(u) != sub.closed_mask(v):
                return False
    return True


# ---------------------------------------------------------------------------
# vertex cover by branching


def exact_vertex_cover(g: Graph) -> frozenset[int]:
    """Minimum vertex cover; smallest size found by iterative deepening."""
    masks = [g.nbr_mask(v) for v in range(g.n)]
    alive = g.all_mask()
    k = _matching_bound(g)
    while True:
        res = _vc_branch(masks, alive, k)
        if res is not None:
            return frozenset(members(res))
        k += 1


def _matching_bound(g: Graph) -> int:
    used = 0
    size = 0
    for u, v in g.edges():
        if not (used >> u) & 1 and not (used >> v) & 1:
            used |= (1 << u) | (1 << v)
            size += 1
    return size


def _vc_branch(masks, alive, k) -> Optional[int]:
    taken = 0
    # leaves: their neighbour can always be taken
    while True:
        best, bdeg, leaf = -1, 0, -1
        a = alive
        while a:
            low = a & -a
            v = low.bit_length() - 1
            a ^= low
            d = bin(masks[v] & alive).count("1")
            if d == 1:
                leaf = v
                break
            if d > bdeg:
                best, bdeg = v, d
        if leaf >= 0:
            if k <= 0:
                return None
            w = (masks[leaf] & alive).bit_length() - 1
            taken |= 1 << w
            alive &= ~(1 << w)
            k -= 1
            continue
        break
    if bdeg == 0:
        return taken
    if k <= 0:
        return None
    # edges left need at least (edges / max degree) cover vertices
    res = _vc_branch(masks, alive & ~(1 << best), k - 1)
    if res is not None:
        return taken | res | (1 << best)
    nb = masks[best] & alive
    cnt = bin(nb).count("1")
    if cnt <= k:
        res = _vc_branch(masks, alive & ~nb & ~(1 << best), k - cnt)
        if res is not None:
            return taken | res | nb
    return None


def twin_cover(g: Graph) -> frozenset[int]:
    """Minimum set hitting every edge that does not join two true twins."""
    keep = [(u, v) for u, v in g.edges() if g.closed_mask(u) != g.closed_mask(v)]
    return exact_vertex_cover(Graph.from_edges(g.n, keep))


def clique_modulator(g: Graph) -> frozenset[int]:
    """Minimum U with G - U a clique (vertex cover of the complement)."""
    return exact_vertex_cover(g.complement())


def decompose(g: Graph, kind: str) -> StructuralDecomposition:
    if kind == "vc":
        u = exact_vertex_cover(g)
        name = "vertex-cover"
    elif kind == "tc":
        u = twin_cover(g)
        name = "twin-cover"
    elif kind == "dc":
        u = clique_modulator(g)
        name = "distance-to-clique"
    elif kind == "nd":
        cls = twin_classes(g)
        return StructuralDecomposition("nd-classes", frozenset(), frozenset(range(g.n)), cls)
    else:
        raise InputError(f"unknown parameter {kind!r}")
    return StructuralDecomposition(name, u, frozenset(range(g.n)) - u)


def neighbourhood_diversity(g: Graph) -> int:
    return len(twin_classes(g))


# ---------------------------------------------------------------------------
# shared pipeline


@dataclass
class _Reduced:
    graph: Graph
    k: int
    trace: TwinTrace
    seeds: list[int]


def _reduce(g: Graph, k: int) -> _Reduced:
    rg, rk, trace = apply_twin_rule(g, k)
    return _Reduced(rg, rk, trace, twin_seeds(rg))


def _subsets_by_size(free: list[int], max_size: int):
    for size in range(0, min(len(free), max_size) + 1):
        yield from combinations(free, size)


def _modulator_search(red: _Reduced, u: frozenset[int], bound: int, mode: str, clique: bool):
    """Smallest solution of size <= bound on the reduced graph, or None."""
    g = red.graph
    seeds = set(red.seeds)
    must = sorted(seeds & u)
    free = sorted(u - seeds)
    rest = sorted(set(range(g.n)) - u)
    best: Optional[tuple[int, ...]] = None
    for extra in _subsets_by_size(free, bound - len(must)):
        x = tuple(sorted(must + list(extra)))
        cap = bound if best is None else len(best) - 1
        if len(x) > cap:
            break
        if clique:
            sol = _dc_round(g, seeds, u, rest, x, cap)
        else:
            sol = _vc_round(g, seeds, u, rest, x, cap)
        if sol is not None and (best is None or len(sol) < len(best)):
            best = sol
            if mode == "decide":
                break
    return best


def _vc_round(g: Graph, seeds, u, rest, x, cap) -> Optional[tuple[int, ...]]:
    xl = set(x)
    l0 = xl | (seeds & set(rest))
    l0m = bits(l0)
    forced = {r for r in rest if r not in l0 and not (g.nbr_mask(r) & l0m)}
    c0 = (seeds & set(rest)) | forced
    y = xl | c0
    if len(y) > cap:
        return None
    blue = sorted(u - xl)
    ground = sorted(set(rest) | set(blue))
    q = induced_partition(ground, y, g)
    ym = bits(y)
    demand = [b for b in blue if not (g.nbr_mask(b) & ym)]
    sub, old = g.induced(ground)
    pos = {v: i for i, v in enumerate(old)}
    rs = {pos[r] for r in rest}
    # Q already holds every code w.r.t. Y (twin-clique edges included), so the
    # forced vertices keep no edges in the bipartite instance
    cs = {pos[c] for c in c0}
    h = Graph.from_edges(
        sub.n,
        [(a, b) for a, b in sub.edges() if (a in rs) != (b in rs) and a not in cs and b not in cs],
    )
    inst = RefinementInstance(
        graph=h,
        red=tuple(sorted(rs)),
        blue=tuple(pos[b] for b in blue),
        q_partition=Partition.of([[pos[v] for v in blk] for blk in q.blocks]),
        c0=frozenset(pos[c] for c in c0),
        t_demand=frozenset(pos[b] for b in demand),
        budget=cap - len(xl),
    )
    res = solve_instance(inst)
    if res is None:
        return None
    return tuple(sorted(xl | {old[v] for v in res.witness}))


def _dc_round(g: Graph, seeds, u, rest, x, cap) -> Optional[tuple[int, ...]]:
    xl = set(x)
    best = None
    if not (seeds & set(rest)) and is_locating_dominating(g, xl):
        best = tuple(sorted(xl))
        return best
    if not rest:
        return None
    # selected clique vertices C != {}: work in the bipartite complement where
    # code(v) ∩ C becomes C minus it; a phantom blue vertex adjacent to all of
    # R carries code C and shares a block with every vertex of empty X-code
    blue = sorted(u - xl)
    ground = rest + blue
    pos = {v: i for i, v in enumerate(ground)}
    zeta = len(ground)
    nr = len(rest)
    edges = [(pos[r], pos[b]) for r in rest for b in blue if not g.has_edge(r, b)]
    edges += [(pos[r], zeta) for r in rest]
    h = Graph.from_edges(zeta + 1, edges)
    xm = bits(xl)
    groups: dict[int, list[int]] = {}
    for v in ground:
        groups.setdefault(g.nbr_mask(v) & xm, []).append(pos[v])
    groups.setdefault(0, []).append(zeta)
    inst = RefinementInstance(
        graph=h,
        red=tuple(range(nr)),
        blue=tuple(range(nr, zeta + 1)),
        q_partition=Partition.of(groups.values()),
        c0=frozenset(pos[s] for s in seeds & set(rest)),
        t_demand=frozenset({zeta}),
        budget=cap - len(xl),
    )
    res = solve_instance(inst)
    if res is None:
        return None
    return tuple(sorted(xl | {ground[v] for v in res.witness}))


def _solve(g: Graph, k: int, kind: str, mode: str) -> Optional[Solution]:
    red = _reduce(g, k)
    if red.k < 0:
        return None
    rg = red.graph
    if kind == "vc":
        u = exact_vertex_cover(rg)
    elif kind == "tc":
        u = twin_cover(rg)
    else:
        u = clique_modulator(rg)
    bound = min(red.k, rg.n)
    sol = _modulator_search(red, u, bound, mode, clique=(kind == "dc"))
    if sol is None:
        return None
    lifted = red.trace.lift(sol)
    if len(lifted) > k or not is_locating_dominating(g, lifted):
        raise AssertionError(f"{kind} solver produced an invalid witness")
    return Solution(tuple(lifted))


def solve_lds_vc(g: Graph, k: int, mode: str = "decide") -> Optional[Solution]:
    return _solve(g, k, "vc", mode)


def solve_lds_twincover(g: Graph, k: int, mode: str = "decide") -> Optional[Solution]:
    return _solve(g, k, "tc", mode)


def solve_lds_distclique(g: Graph, k: int, mode: str = "decide") -> Optional[Solution]:
    return _solve(g, k, "dc", mode)


def nd_kernel(g: Graph, k: int) -> tuple[Graph, int]:
    rg, rk, _ = apply_twin_rule(g, k)
    return rg, rk


def solve_lds_nd(g: Graph, k: int, cap: int = BRUTE_FORCE_CAP, mode: str = "decide") -> Optional[Solution]:
    rg, rk, trace = apply_twin_rule(g, k)
    if rk < 0:
        return None
    if rg.n > cap:
        raise RefusalError(f"kernel has {rg.n} vertices, above the brute-force cap {cap}")
    best = brute_force_lds(rg, cap)
    if best.size > rk:
        return None
    lifted = trace.lift(best.vertices)
    if not is_locating_dominating(g, lifted):
        raise AssertionError("lifted kernel witness is not locating-dominating")
    return Solution(tuple(lifted))


SOLVERS = {
    "vc": solve_lds_vc,
    "tc": solve_lds_twincover,
    "dc": solve_lds_distclique,
    "nd": solve_lds_nd,
}


def minimum_lds(g: Graph, kind: str = "vc") -> Solution:
    """Optimal solution through the chosen parameterized solver."""
    if kind not in SOLVERS:
        raise InputError(f"unknown parameter {kind!r}")
    sol = SOLVERS[kind](g, g.n, mode="optimize")
    assert sol is not None
    return sol


__all__ = [
    "KINDS",
    "SOLVERS",
    "StructuralDecomposition",
    "clique_modulator",
    "decompose",
    "exact_vertex_cover",
    "minimum_lds",
    "nd_kernel",
    "neighbourhood_diversity",
    "solve_lds_distclique",
    "solve_lds_nd",
    "solve_lds_twincover",
    "solve_lds_vc",
    "twin_cover",
    "twin_kinds",
]
