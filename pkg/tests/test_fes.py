import random

import pytest

from idsolve.errors import InputError
from idsolve.fes import (
    GadgetGap,
    GadgetLibrary,
    core_multigraph,
    discover_gadgets,
    find_hanging_trees,
    kernel_dot,
    kernelize_fes,
    load_library,
    parse_library,
    reduce_core_edge,
    reduce_hanging_tree,
)
from idsolve.generators import connected_fes
from idsolve.graph import Graph, feedback_edge_number, lds_number
from idsolve.trees import ahu, classify_doubly, classify_rooted, rooted_gadget, rooted_trees


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def same_decisions(g, k_range, kernel_of):
    opt = lds_number(g)
    for k in k_range:
        ker, k2, _ = kernel_of(k)
        got = k2 >= 0 and lds_number(ker) <= k2
        if got != (opt <= k):
            return False
    return True


def test_core_of_tree_is_empty():
    cm = core_multigraph(path(5))
    assert cm.vertices == [] and cm.edges == []


def test_core_of_cycle():
    cm = core_multigraph(cycle(6))
    assert len(cm.vertices) == 2 and len(cm.edges) == 2
    assert {(e.x, e.y) for e in cm.edges} == {(cm.vertices[0], cm.vertices[1])}


def test_core_of_theta():
    es = [(0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1), (0, 6), (6, 7), (7, 1)]
    cm = core_multigraph(Graph.from_edges(8, es))
    assert cm.vertices == [0, 1] and len(cm.edges) == 3 and cm.fes == 2


def test_core_bounds_random():
    rng = random.Random(1)
    for _ in range(100):
        g = connected_fes(rng.randint(3, 30), rng.randint(1, 6), rng)
        cm = core_multigraph(g)
        f = feedback_edge_number(g)
        assert len(cm.vertices) <= max(3 * f - 2, 2)
        assert len(cm.edges) <= max(4 * f - 3, 2)
        assert all(e.x != e.y for e in cm.edges)


def test_hanging_tree_examples():
    (ht,) = find_hanging_trees(path(5))
    assert ht.vertices == [0, 1, 2, 3, 4]
    c4 = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5)])
    (ht,) = find_hanging_trees(c4)
    assert ht.anchor == 0 and len(ht.vertices) == 3
    lollipop = Graph.from_edges(7, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6)])
    (ht,) = find_hanging_trees(lollipop)
    assert ht.anchor == 3 and set(ht.vertices) & {0, 1, 2} == set()


def _host_with_hanging(t_edges, t_n):
    # a 4-cycle 0..3 with the tree's root identified with vertex 0
    edges = [(0, 1), (1, 2), (2, 3), (3, 0)]
    ids = {0: 0}
    for i in range(1, t_n):
        ids[i] = 3 + i
    edges += [(ids[u], ids[v]) for u, v in t_edges]
    return Graph.from_edges(3 + t_n, edges)


def test_rule2_gadget_is_fixed_point():
    t, _ = rooted_gadget("C")
    g = _host_with_hanging(t.tree.edges(), t.n)
    (ht,) = find_hanging_trees(g)
    g2, k2 = reduce_hanging_tree(g, 4, ht)
    assert g2 == g and k2 == 4


def test_rule2_shrinks_large_class_c_tree():
    big = next(t for t in rooted_trees(9) if classify_rooted(t)[0] == "C")
    g = _host_with_hanging(big.tree.edges(), big.n) if big.root == 0 else None
    if g is None:
        # re-root so the anchor is vertex 0
        perm = {big.root: 0, 0: big.root}
        es = [(perm.get(u, u), perm.get(v, v)) for u, v in big.tree.edges()]
        g = _host_with_hanging(es, big.n)
    (ht,) = find_hanging_trees(g)
    _, t0 = classify_rooted(ht.rooted)
    g2, k2 = reduce_hanging_tree(g, 10, ht)
    assert g2.n == g.n - 9 + 5
    assert k2 == 10 - t0 + 2
    for k in range(1, g.n + 1):
        assert (lds_number(g) <= k) == (lds_number(g2) <= k - t0 + 2)


def test_rule3_long_path():
    # two vertices joined by three paths, one of them with 7 interior vertices
    es = [(0, 2), (2, 1), (0, 3), (3, 1)]
    chain = [0] + list(range(4, 11)) + [1]
    es += list(zip(chain, chain[1:]))
    es += [(0, 11)]
    g = Graph.from_edges(12, es)
    lib = load_library()
    cm = core_multigraph(g)
    e = max(cm.edges, key=lambda e: len(e.path))
    assert len(e.path) == 7
    for k in range(1, g.n + 1):
        g2, k2 = reduce_core_edge(g, k, e, lib)
        assert (lds_number(g) <= k) == (k2 >= 0 and lds_number(g2) <= k2)


def test_rule3_gadget_gap_is_explicit():
    es = [(0, 2), (2, 1), (0, 3), (3, 1)]
    chain = [0] + list(range(4, 11)) + [1]
    es += list(zip(chain, chain[1:]))
    g = Graph.from_edges(11, es)
    empty = GadgetLibrary(2, {})
    with pytest.raises(GadgetGap) as info:
        kernelize_fes(g, 5, empty, strict=True)
    assert len(info.value.signature) == 25
    _, _, report = kernelize_fes(g, 5, empty)
    assert report.gaps and report.edges_replaced == 0


def test_cycles():
    for n in range(10, 15):
        g = cycle(n)
        assert same_decisions(g, range(1, n + 1), lambda k: kernelize_fes(g, k))
    ker, k2, report = kernelize_fes(cycle(100), 100)
    assert ker.n <= 12 and report.fes == 1
    assert k2 == 100 - 40 + lds_number(ker)  # C100 needs 40 vertices


def test_tree_input_becomes_a_gadget():
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(2, 14)
        g = Graph.from_edges(n, [(rng.randrange(v), v) for v in range(1, n)])
        ker, _, report = kernelize_fes(g, n)
        assert ker.n <= 6 and report.fes == 0
        assert same_decisions(g, range(1, n + 1), lambda k: kernelize_fes(g, k))


def test_random_small_fes_sweep():
    rng = random.Random(5)
    ratios = []
    for _ in range(40):
        g = connected_fes(rng.randint(4, 14), rng.randint(0, 3), rng)
        assert same_decisions(g, range(1, g.n + 1), lambda k: kernelize_fes(g, k))
        _, _, report = kernelize_fes(g, g.n)
        ratios.append(report.ratio)
    assert max(ratios) <= 40


def test_library_integrity(tmp_path):
    lib = load_library()
    assert lib.max_n == 10 and len(lib) > 0
    for sig, e in lib.entries.items():
        assert classify_doubly(e.tree) == (sig, classify_doubly(e.tree)[1])
    assert any(e.tree.n == 2 for e in lib.entries.values())
    text = lib.dumps()
    assert parse_library(text).entries.keys() == lib.entries.keys()
    head, _, body = text.partition("\n")
    tampered = head + "\n" + body.replace("k=", "k=1", 1)
    with pytest.raises(InputError):
        parse_library(tampered)
    p = tmp_path / "lib.txt"
    lib.save(p)
    assert load_library(p).entries.keys() == lib.entries.keys()


def test_discovery_is_monotone_and_minimal():
    small = discover_gadgets(5)
    mid = discover_gadgets(6)
    assert set(small.entries) <= set(mid.entries)
    for sig, e in small.entries.items():
        assert mid[sig].tree.n == e.tree.n
        assert ahu(mid[sig].tree.tree, 0, mid[sig].tree.root2) == ahu(e.tree.tree, 0, e.tree.root2)
    assert discover_gadgets(6).dumps() == mid.dumps()
    bundled = load_library()
    for sig in mid.entries:
        assert sig in bundled


def test_library_env_override(tmp_path, monkeypatch):
    from idsolve import fes

    p = tmp_path / "small.txt"
    discover_gadgets(4).save(p)
    monkeypatch.setenv(fes.LIBRARY_ENV, str(p))
    assert fes.default_library_path() == p
    assert load_library().max_n == 4


def test_kernel_dot():
    text = kernel_dot(Graph.from_edges(3, [(0, 1)]))
    assert text.startswith("graph kernel {") and "0 -- 1;" in text and "  2;" in text
