"""Seeded random instance generators used by tests, benchmarks and the CLI."""

from __future__ import annotations

import random
from typing import Optional

from .graph import Graph


def gnp(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_tree_edges(n: int, rng: random.Random) -> list[tuple[int, int]]:
    return [(rng.randrange(v), v) for v in range(1, n)]


def connected_fes(n: int, fes: int, rng: random.Random) -> Graph:
    """Random connected graph on n vertices with exactly ``fes`` extra edges
    (fewer if the graph runs out of non-edges)."""
    edges = set((min(u, v), max(u, v)) for u, v in random_tree_edges(n, rng))
    perm = list(range(n))
    rng.shuffle(perm)
    free = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(free)
    edges.update(free[:fes])
    return Graph.from_edges(n, [(perm[u], perm[v]) for u, v in edges])


def split_graph(n: int, clique: int, p: float, rng: random.Random) -> Graph:
    """Clique on the first ``clique`` vertices plus a random independent rest."""
    edges = [(u, v) for u in range(clique) for v in range(u + 1, clique)]
    edges += [(u, v) for u in range(clique) for v in range(clique, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def vc_graph(n: int, vc: int, p: float, rng: random.Random, inner: Optional[float] = None) -> Graph:
    """Graph whose first ``vc`` vertices cover every edge; rest independent."""
    inner = p if inner is None else inner
    edges = [(u, v) for u in range(vc) for v in range(u + 1, vc) if rng.random() < inner]
    for r in range(vc, n):
        nb = [u for u in range(vc) if rng.random() < p] or [rng.randrange(vc)]
        edges += [(u, r) for u in nb]
    return Graph.from_edges(n, edges)


def random_bipartite(nr: int, nb: int, p: float, rng: random.Random) -> Graph:
    """Vertices 0..nr-1 red, nr..nr+nb-1 blue."""
    return Graph.from_edges(nr + nb, [(r, nr + b) for r in range(nr) for b in range(nb) if rng.random() < p])


def random_set_system(universe: int, tests: int, rng: random.Random):
    from .testcover import SetSystem

    fam = []
    for _ in range(tests):
        q = rng.random()
        fam.append([x for x in range(universe) if rng.random() < q])
    return SetSystem.of(universe, fam)
