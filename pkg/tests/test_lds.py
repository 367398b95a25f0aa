import random
from itertools import combinations

import networkx as nx
import pytest

from idsolve.errors import InputError, RefusalError
from idsolve.generators import gnp, split_graph, vc_graph
from idsolve.graph import Graph, brute_force_lds, is_locating_dominating, lds_number
from idsolve.lds import (
    SOLVERS,
    decompose,
    exact_vertex_cover,
    minimum_lds,
    nd_kernel,
    neighbourhood_diversity,
    solve_lds_distclique,
    solve_lds_nd,
    solve_lds_twincover,
    solve_lds_vc,
)


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return Graph.from_edges(n, list(combinations(range(n), 2)))


def star(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def is_cover(g, c):
    return all(u in c or v in c for u, v in g.edges())


def test_vertex_cover_examples():
    assert exact_vertex_cover(Graph.from_edges(4, [])) == frozenset()
    assert len(exact_vertex_cover(complete(3))) == 2
    pet = nx.petersen_graph()
    g = Graph.from_edges(10, pet.edges())
    vc = exact_vertex_cover(g)
    assert len(vc) == 6 and is_cover(g, vc)
    assert not any(is_cover(g, set(c)) for c in combinations(range(10), 5))


def test_vertex_cover_random():
    rng = random.Random(1)
    for _ in range(40):
        g = gnp(rng.randint(1, 10), rng.random(), rng)
        vc = exact_vertex_cover(g)
        assert is_cover(g, vc)
        assert not any(is_cover(g, set(c)) for c in combinations(range(g.n), len(vc) - 1)) if vc else True


@pytest.mark.parametrize("kind", ["vc", "tc", "dc"])
def test_decompositions_are_valid(kind):
    rng = random.Random(2)
    for _ in range(30):
        g = gnp(rng.randint(1, 10), rng.random(), rng)
        d = decompose(g, kind)
        d.check(g)
        assert set(d.modulator) | set(d.rest) == set(range(g.n))


def test_vc_examples():
    assert solve_lds_vc(Graph.from_edges(1, []), 1).vertices == (0,)
    assert solve_lds_vc(path(4), 1) is None
    sol = solve_lds_vc(path(4), 2)
    assert sol.size == 2 and is_locating_dominating(path(4), sol.vertices)


def test_twincover_examples():
    matching = Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
    assert solve_lds_twincover(matching, 3) is not None
    assert solve_lds_twincover(matching, 2) is None


def test_distclique_examples():
    for k in range(1, 5):
        got = solve_lds_distclique(complete(4), k)
        assert (got is not None) == (k >= 3)
    apex = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (3, 0)])
    for k in range(1, 5):
        assert (solve_lds_distclique(apex, k) is not None) == (lds_number(apex) <= k)


def test_nd_kernel_examples():
    g, k = nd_kernel(star(5), 5)
    assert g.n <= 4 and k == 2
    g, k = nd_kernel(path(4), 2)
    assert g.n == 4 and k == 2
    k333 = Graph.from_edges(9, [(u, v) for u in range(9) for v in range(u + 1, 9) if u // 3 != v // 3])
    assert neighbourhood_diversity(k333) == 3
    ker, kk = nd_kernel(k333, 9)
    assert ker.n <= 6
    opt = lds_number(k333)
    for k in range(1, 10):
        ker, kk = nd_kernel(k333, k)
        assert (opt <= k) == (kk >= 0 and lds_number(ker) <= kk)


def test_nd_examples():
    assert solve_lds_nd(star(5), 5) is not None
    assert solve_lds_nd(star(5), 4) is None
    assert solve_lds_nd(path(4), 2) is not None
    assert solve_lds_nd(Graph.from_edges(2, []), 1) is None
    with pytest.raises(RefusalError):
        solve_lds_nd(path(25), 25, cap=20)


@pytest.mark.parametrize("kind", sorted(SOLVERS))
def test_oracle_sweep(kind):
    rng = random.Random(sorted(SOLVERS).index(kind))
    solver = SOLVERS[kind]
    for _ in range(40):
        g = gnp(rng.randint(1, 10), rng.choice([0.2, 0.5, 0.8]), rng)
        opt = lds_number(g)
        prev = False
        for k in range(1, g.n + 1):
            sol = solver(g, k)
            assert (sol is not None) == (opt <= k)
            if sol is not None:
                assert sol.size <= k and is_locating_dominating(g, sol.vertices)
            # monotone in k
            assert not prev or sol is not None
            prev = sol is not None


def test_split_graphs_distclique():
    rng = random.Random(4)
    for _ in range(25):
        n = rng.randint(2, 11)
        g = split_graph(n, rng.randint(1, n), 0.5, rng)
        opt = lds_number(g)
        assert minimum_lds(g, "dc").size == opt


def test_minimum_lds_matches_brute_force():
    rng = random.Random(5)
    for _ in range(25):
        g = vc_graph(rng.randint(4, 12), 3, 0.5, rng)
        opt = brute_force_lds(g).size
        for kind in SOLVERS:
            sol = minimum_lds(g, kind)
            assert sol.size == opt and is_locating_dominating(g, sol.vertices)
    with pytest.raises(InputError):
        minimum_lds(path(3), "xx")
