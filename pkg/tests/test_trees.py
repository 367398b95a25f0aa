import random

import pytest

from idsolve.errors import InputError
from idsolve.graph import lds_number
from idsolve.trees import (
    LETTERS,
    GADGET_VALUES,
    RootedTree,
    ahu,
    brute_opt_doubly,
    brute_opt_rooted,
    canonical_relabel,
    check_gadget_values,
    classify_doubly,
    classify_rooted,
    double_bounded,
    doubly_rooted_trees,
    free_trees,
    is_double_type,
    is_type,
    opt_doubly,
    opt_rooted,
    rooted_gadget,
    rooted_trees,
    single_bounded,
    transpose_signature,
    tree,
)


def test_gadget_value_examples():
    assert opt_rooted(GADGET_VALUES["A"][0]) == (0, 1, 1, 1, 1)
    assert opt_rooted(GADGET_VALUES["C"][0]) == (2, 2, 2, 3, 3)
    assert opt_rooted(GADGET_VALUES["E"][0]) == (3, 3, 3, 3, 3)
    assert set(check_gadget_values()) == set(LETTERS)


def test_classify_rooted_examples():
    assert classify_rooted(tree(2, [(0, 1)])) == ("D", 1)
    assert classify_rooted(tree(3, [(0, 1), (1, 2)])) == ("B", 1)
    assert classify_rooted(tree(1, [])) == ("A", 0)
    for letter in LETTERS:
        t, k = rooted_gadget(letter)
        assert classify_rooted(t) == (letter, k)


def test_single_edge_doubly():
    vals = opt_doubly(tree(2, [(0, 1)], 0, 1))
    assert vals[0] == 0
    assert vals[24] == 2
    assert vals == brute_opt_doubly(tree(2, [(0, 1)], 0, 1))


def test_path_of_three_endpoints_signature():
    t = tree(3, [(0, 1), (1, 2)], 0, 2)
    sig, base = classify_doubly(t)
    vals = brute_opt_doubly(t)
    assert base == vals[0] and sig == "".join(str(v - base) for v in vals)


def test_transpose_symmetry():
    for n in range(2, 7):
        for t in doubly_rooted_trees(n):
            sig, base = classify_doubly(t)
            sw = RootedTree(t.tree, t.root2, t.root)
            sig2, base2 = classify_doubly(sw)
            assert base == base2 and sig2 == transpose_signature(sig)


@pytest.mark.parametrize("n", range(1, 8))
def test_rooted_dp_matches_brute_force(n):
    for t in rooted_trees(n):
        vals = opt_rooted(t)
        assert vals == brute_opt_rooted(t)
        assert single_bounded(vals)
        assert vals[2] == lds_number(t.tree)


@pytest.mark.parametrize("n", range(2, 7))
def test_doubly_dp_matches_brute_force(n):
    for t in doubly_rooted_trees(n):
        vals = opt_doubly(t)
        assert vals == brute_opt_doubly(t)
        assert double_bounded(vals)


def test_direct_definitions_agree_with_optima():
    # a brute-force optimal type-X' set is also of every weaker type X
    from itertools import combinations

    rng = random.Random(0)
    trees = list(rooted_trees(6))
    for t in rng.sample(trees, 10):
        vals = opt_rooted(t)
        for lvl in range(5):
            wit = next(
                c for c in combinations(range(t.n), vals[lvl]) if is_type(t, lvl, c)
            )
            for lower in range(lvl):
                assert is_type(t, lower, wit)
    t = tree(4, [(0, 1), (1, 2), (2, 3)], 0, 3)
    assert is_double_type(t, 4, 4, range(4))


def test_tree_counts():
    # OEIS A000055 and A000081
    assert [sum(1 for _ in free_trees(n)) for n in range(1, 10)] == [1, 1, 1, 2, 3, 6, 11, 23, 47]
    assert [sum(1 for _ in rooted_trees(n)) for n in range(1, 9)] == [1, 1, 2, 4, 9, 20, 48, 115]


def test_canonical_relabel_is_isomorphic():
    for t in doubly_rooted_trees(6):
        c = canonical_relabel(t)
        assert c.root == 0
        assert ahu(c.tree, c.root, c.root2) == ahu(t.tree, t.root, t.root2)
        assert opt_doubly(c) == opt_doubly(t)


def test_rejects_non_trees():
    with pytest.raises(InputError):
        tree(3, [(0, 1)])
    with pytest.raises(InputError):
        tree(3, [(0, 1), (1, 2)], 0, 0)
