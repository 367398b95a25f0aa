import random

import pytest

from idsolve.errors import InputError, RefusalError
from idsolve.graph import Graph, brute_force_lds, is_locating_dominating
from idsolve.reductions import (
    TRIVIAL_NO,
    TRIVIAL_YES,
    RBDSInstance,
    bit,
    brute_force_rbds,
    clog2,
    greedy_rbds,
    lds_layout,
    preprocess_rbds,
    random_rbds,
    rbds_decision,
    rbds_to_lds,
    rbds_to_tc,
    widths,
)
from idsolve.testcover import brute_force_tc, is_test_cover

ONE = RBDSInstance.of(1, 1, [(0, 0)], 1)


def test_clog2_and_bits():
    assert [clog2(x) for x in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]
    # index 3 read over three positions: 1, 1, 0
    assert [bit(3, i) for i in (1, 2, 3)] == [1, 1, 0]
    assert [bit(1, i) for i in (1, 2, 3)] == [1, 0, 0]
    assert [bit(2, i) for i in (1, 2, 3)] == [0, 1, 0]


def test_preprocess_examples():
    assert preprocess_rbds(RBDSInstance.of(1, 2, [(0, 0)], 1)) == TRIVIAL_NO
    inst = preprocess_rbds(RBDSInstance.of(3, 2, [(0, 0), (1, 0), (2, 1)], 1))
    assert inst.n_red == 2
    assert preprocess_rbds(RBDSInstance.of(2, 2, [(0, 0), (1, 1)], 2)) == TRIVIAL_YES
    # an isolated red vertex is dropped
    inst = preprocess_rbds(RBDSInstance.of(3, 2, [(0, 0), (2, 1)], 1))
    assert inst.n_red == 2


def test_preprocess_keeps_decision():
    rng = random.Random(1)
    for _ in range(200):
        raw = random_rbds(6, 4, rng)
        out = preprocess_rbds(raw)
        if out == TRIVIAL_YES:
            assert rbds_decision(raw)
        elif out == TRIVIAL_NO:
            assert not rbds_decision(raw)
        else:
            assert rbds_decision(out) == rbds_decision(raw)
            assert out.k <= out.n_red
            assert len({frozenset(s) for s in out.red_nbrs()}) == out.n_red


def test_lds_example_sizes():
    g, k = rbds_to_lds(ONE)
    assert g.n == 11 and k == 5


def test_lds_bit_pattern_of_third_red_vertex():
    inst = RBDSInstance.of(5, 2, [(r, r % 2) for r in range(5)], 1)
    g, _ = rbds_to_lds(inst)
    lay = lds_layout(inst)
    q, _ = widths(inst)
    assert q == 4
    ys = lay["bitrep_R"]
    r3 = 2
    assert [int(g.has_edge(r3, ys[i])) for i in range(1, 4)] == [1, 1, 0]
    assert g.has_edge(r3, ys[0])


def test_lds_structure():
    rng = random.Random(2)
    for _ in range(50):
        inst = preprocess_rbds(random_rbds(6, 4, rng))
        if isinstance(inst, str):
            continue
        g, k = rbds_to_lds(inst)
        q, p = widths(inst)
        lay = lds_layout(inst)
        assert k == inst.k + (q + 1) + (p + 1)
        assert g.n == inst.n_red + 2 * inst.n_blue + 2 * (q + 1) + 2 * (p + 1)
        for v in lay["pendants_R"] + lay["pendants_B"]:
            assert g.degree(v) == 1
        cover = set(lay["bitrep_R"]) | set(lay["bitrep_B"]) | set(lay["B"])
        assert all(u in cover or v in cover for u, v in g.edges())
        # b°/b* of one pair see the same connectors
        bs = lay["B"]
        for j in range(inst.n_blue):
            a, b = bs[2 * j], bs[2 * j + 1]
            conn = set(lay["bitrep_B"])
            assert set(g.adj[a]) & conn == set(g.adj[b]) & conn


def test_lds_yes_witness_construction():
    rng = random.Random(3)
    for _ in range(50):
        inst = preprocess_rbds(random_rbds(6, 4, rng))
        if isinstance(inst, str):
            continue
        sol = brute_force_rbds(inst)
        g, k = rbds_to_lds(inst)
        lay = lds_layout(inst)
        s = set(sol.vertices) | set(lay["bitrep_R"]) | set(lay["bitrep_B"])
        assert is_locating_dominating(g, s)
        assert len(s) == sol.size + len(lay["bitrep_R"]) + len(lay["bitrep_B"])


def test_tc_example():
    s, k = rbds_to_tc(ONE)
    assert len(s.tests) == 3 and s.universe_size == 5 and k == 3
    # every connector test is the only one containing its pendant item
    pend = [2, 3]
    for i, item in enumerate(pend):
        holders = [j for j, t in enumerate(s.tests) if item in t]
        assert holders == [1 + i]
    sol = brute_force_tc(s)
    assert {1, 2} <= set(sol.vertices)


def test_tc_yes_witness_construction():
    rng = random.Random(4)
    for _ in range(50):
        inst = preprocess_rbds(random_rbds(6, 4, rng))
        if isinstance(inst, str):
            continue
        sol = brute_force_rbds(inst)
        s, k = rbds_to_tc(inst)
        chosen = list(sol.vertices) + list(range(inst.n_red, len(s.tests)))
        assert is_test_cover(s, chosen)
        assert (len(chosen) <= k) == (sol.size <= inst.k)


def test_equivalence_small_corpus():
    rng = random.Random(5)
    seen = 0
    while seen < 15:
        inst = preprocess_rbds(random_rbds(4, 3, rng))
        if isinstance(inst, str):
            continue
        seen += 1
        want = rbds_decision(inst)
        g, k = rbds_to_lds(inst)
        assert (brute_force_lds(g, cap=40).size <= k) == want
        s, kt = rbds_to_tc(inst)
        tc = brute_force_tc(s)
        assert (tc is not None and tc.size <= kt) == want


def test_brute_force_rbds_examples():
    star = RBDSInstance.of(3, 3, [(0, 0), (0, 1), (0, 2), (1, 0), (2, 2)], 1)
    assert brute_force_rbds(star).vertices == (0,)
    matching = RBDSInstance.of(3, 3, [(i, i) for i in range(3)], 3)
    assert brute_force_rbds(matching).vertices == (0, 1, 2)
    assert brute_force_rbds(RBDSInstance.of(1, 2, [(0, 0)], 1)) is None
    with pytest.raises(RefusalError):
        brute_force_rbds(RBDSInstance.of(21, 1, [(0, 0)], 1))
    rng = random.Random(6)
    for _ in range(100):
        inst = random_rbds(7, 5, rng)
        exact = brute_force_rbds(inst)
        greedy = greedy_rbds(inst)
        assert (exact is None) == (greedy is None)
        if exact is not None:
            assert len(greedy) >= exact.size


def test_instance_validation():
    with pytest.raises(InputError):
        RBDSInstance.of(1, 1, [(0, 1)], 1)
    with pytest.raises(InputError):
        rbds_to_lds(RBDSInstance.of(0, 0, [], 0))
    assert RBDSInstance.of(2, 1, [(1, 0)], 1).graph == Graph.from_edges(3, [(1, 2)])
