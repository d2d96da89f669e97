"""Structures: canonical layouts, membership, bigness, subsets."""

import itertools
import random

import pytest

from helpers import SMALL_KINDS, closure_bruteforce, random_member
from ramseylab.structures import (
    ClassKind,
    FinStructure,
    from_doc,
    induced_substructure,
    is_big,
    is_member,
    make_canonical,
    subset_closure,
    subset_induces_member,
    subset_is_big,
    to_doc,
    tree_children,
    tree_meet,
    tree_root,
)


def test_class_kind_validation():
    with pytest.raises(ValueError):
        ClassKind("nope")
    with pytest.raises(ValueError):
        ClassKind("chi_or")  # missing chi
    with pytest.raises(ValueError):
        ClassKind("or", chi=2)  # stray parameter
    with pytest.raises(ValueError):
        ClassKind("chi_color", chi=0)
    with pytest.raises(ValueError):
        ClassKind("hypergraph", edge_arity=2, palette=0)
    assert ClassKind("n_tree", height=0).label() == "n_tree(0)"
    assert ClassKind("hypergraph", edge_arity=2, palette=3).label() == "hypergraph(2,3)"


def test_canonical_or_layout():
    s = make_canonical(ClassKind("or"), 4)
    assert s.size == 4 and s.parts is None and s.edges is None


def test_canonical_chi_or_layout():
    s = make_canonical(ClassKind("chi_or", chi=3), 2)
    assert s.size == 6
    assert s.parts == (0, 0, 1, 1, 2, 2)  # consecutive parts


def test_canonical_chi_color_layout():
    s = make_canonical(ClassKind("chi_color", chi=3), 2)
    assert s.size == 6
    assert [s.residue_of(e) for e in range(6)] == [0, 1, 2, 0, 1, 2]


def test_canonical_ceq_layout():
    s = make_canonical(ClassKind("ceq"), 3)
    assert s.blocks == ((0, 1, 2), (3, 4, 5), (6, 7, 8))


def test_canonical_tree_layout():
    s = make_canonical(ClassKind("n_tree", height=2), 2)
    assert s.size == 7  # 1 + 2 + 4
    assert tree_root(s) == 0 and s.level[0] == 0
    kids = tree_children(s)
    for v in range(s.size):
        want = 2 if s.level[v] < 2 else 0
        assert len(kids[v]) == want
    # preorder: each child block is contiguous
    assert s.parent == (-1, 0, 1, 1, 0, 4, 4)


def test_canonical_graph_layout():
    s = make_canonical(ClassKind("ordered_graph"), 3)
    assert s.edges == frozenset({(0, 1), (1, 2)})  # bit pattern of column index


def test_canonical_hypergraph_layout():
    cls = ClassKind("hypergraph", edge_arity=2, palette=3)
    s = make_canonical(cls, 2)
    assert s.hyper_color(()) == 0
    assert s.hyper_color((0,)) == 1
    assert s.hyper_color((1,)) == 2


def test_canonical_members_and_big():
    for cls in SMALL_KINDS:
        for mu in range(4):
            s = make_canonical(cls, mu)
            assert is_member(s)
            assert is_big(s, mu)


def test_canonical_zero_is_empty():
    for cls in SMALL_KINDS:
        s = make_canonical(cls, 0)
        assert s.size == 0
        assert is_member(s)


def test_random_members_are_members():
    for cls in SMALL_KINDS:
        for seed in range(40):
            assert is_member(random_member(cls, random.Random(seed)))


def test_membership_rejects_malformed():
    ceq = ClassKind("ceq")
    assert not is_member(FinStructure(ceq, 3, blocks=((0, 2), (1,))))  # not convex
    assert not is_member(FinStructure(ceq, 3, blocks=((0, 1),)))  # misses 2
    tree = ClassKind("n_tree", height=1)
    assert not is_member(FinStructure(tree, 2, parent=(-1, -1), level=(0, 0)))
    assert not is_member(FinStructure(tree, 2, parent=(-1, 0), level=(0, 0)))  # level tie
    assert not is_member(FinStructure(tree, 2, parent=(-1, 0), level=(0, 2)))  # too deep
    og = ClassKind("ordered_graph")
    assert not is_member(FinStructure(og, 2, edges=frozenset({(1, 0)})))
    chi = ClassKind("chi_or", chi=2)
    assert not is_member(FinStructure(chi, 2, parts=(1, 0)))  # decreasing parts
    assert not is_member(FinStructure(chi, 2, parts=(0, 2)))  # part out of range
    # payload on the wrong kind
    assert not is_member(FinStructure(ClassKind("or"), 2, parts=(0, 0)))


def test_preorder_constraint():
    tree = ClassKind("n_tree", height=2)
    # subtree of 1 is {1, 3}, not an interval
    bad = FinStructure(tree, 4, parent=(-1, 0, 0, 1), level=(0, 1, 1, 2))
    assert not is_member(bad)
    good = FinStructure(tree, 4, parent=(-1, 0, 1, 0), level=(0, 1, 2, 1))
    assert is_member(good)


def test_big_frozen_cases():
    assert is_big(make_canonical(ClassKind("or"), 3), 3)
    assert not is_big(make_canonical(ClassKind("or"), 3), 4)
    chi = ClassKind("chi_or", chi=2)
    assert not is_big(FinStructure(chi, 3, parts=(0, 0, 0)), 1)  # part 1 empty
    ceq = ClassKind("ceq")
    assert is_big(FinStructure(ceq, 4, blocks=((0, 1), (2, 3))), 2)
    assert not is_big(FinStructure(ceq, 4, blocks=((0, 1, 2), (3,))), 2)
    tree = ClassKind("n_tree", height=1)
    assert not is_big(FinStructure(tree, 1, level=(1,), parent=(-1,)), 1)  # root too low
    assert is_big(FinStructure(tree, 2, level=(0, 1), parent=(-1, 0)), 1)


def test_big_antitone_in_level():
    for cls in SMALL_KINDS:
        for seed in range(20):
            s = random_member(cls, random.Random(seed))
            values = [is_big(s, mu) for mu in range(5)]
            assert values[0] is True
            for lo, hi in itertools.combinations(range(5), 2):
                if values[hi]:
                    assert values[lo]


def test_big_monotone_under_extension_except_trees():
    # induced big subsets certify bigness of the whole member, trees aside
    for cls in SMALL_KINDS:
        if cls.kind == "n_tree":
            continue
        for seed in range(25):
            rng = random.Random(seed)
            s = random_member(cls, rng)
            for _ in range(4):
                subset = tuple(
                    sorted(rng.sample(range(s.size), rng.randrange(s.size + 1)))
                )
                subset = subset_closure(s, subset)
                if not subset_induces_member(s, subset):
                    continue
                for mu in range(4):
                    if subset_is_big(s, subset, mu):
                        assert is_big(s, mu), (cls.label(), seed, subset, mu)


def test_tree_big_not_monotone_under_extension():
    # a barren sibling branch spoils the whole tree
    tree = ClassKind("n_tree", height=2)
    s = FinStructure(tree, 4, parent=(-1, 0, 1, 0), level=(0, 1, 2, 1))
    assert is_member(s)
    assert subset_is_big(s, (0, 1, 2), 1)
    assert not is_big(s, 1)


def test_closure_properties():
    for cls in SMALL_KINDS:
        for seed in range(15):
            rng = random.Random(seed)
            s = random_member(cls, rng)
            subset = tuple(sorted(rng.sample(range(s.size), rng.randrange(s.size + 1))))
            closed = subset_closure(s, subset)
            assert set(subset) <= set(closed)
            assert subset_closure(s, closed) == closed
            assert closed == closure_bruteforce(s, subset)


def test_closure_rejects_out_of_range():
    s = make_canonical(ClassKind("or"), 3)
    with pytest.raises(ValueError):
        subset_closure(s, (0, 3))


def test_tree_meet_closure():
    s = make_canonical(ClassKind("n_tree", height=2), 2)
    # two leaves in different subtrees meet at the root
    leaves = [v for v in range(s.size) if s.level[v] == 2]
    a, b = leaves[0], leaves[-1]
    assert tree_meet(s, a, b) == 0
    assert subset_closure(s, (a, b)) == (0, a, b)


def test_chi_color_positional_membership():
    cls = ClassKind("chi_color", chi=2)
    s = make_canonical(cls, 3)
    assert subset_induces_member(s, (0, 1))
    assert subset_induces_member(s, (2, 3, 4, 5))
    assert not subset_induces_member(s, (1, 2))  # starts at residue 1
    assert not subset_induces_member(s, (0, 2))  # two even residues in a row


def test_subset_big_matches_induced():
    for cls in SMALL_KINDS:
        for seed in range(25):
            rng = random.Random(seed)
            s = random_member(cls, rng)
            subset = subset_closure(
                s, tuple(sorted(rng.sample(range(s.size), rng.randrange(s.size + 1))))
            )
            if not subset_induces_member(s, subset):
                continue
            frag, back = induced_substructure(s, subset)
            assert back == subset
            assert is_member(frag)
            for mu in range(4):
                assert subset_is_big(s, subset, mu) == is_big(frag, mu)


def test_induced_relabels_in_order():
    cls = ClassKind("ordered_graph")
    s = make_canonical(cls, 4)
    frag, back = induced_substructure(s, (1, 3))
    assert back == (1, 3)
    assert frag.size == 2
    assert frag.has_edge(0, 1) == s.has_edge(1, 3)


def test_canonical_chain_embeds():
    # the mu-canonical sits inside the (mu+1)-canonical as an induced fragment
    for cls in SMALL_KINDS:
        for mu in range(1, 3):
            small = make_canonical(cls, mu)
            big = make_canonical(cls, mu + 1)
            subset = _chain_subset(cls, mu)
            frag, _ = induced_substructure(big, subset)
            assert frag == small, (cls.label(), mu)


def _chain_subset(cls, mu):
    if cls.kind in ("or", "ordered_graph", "hypergraph"):
        return tuple(range(mu))
    if cls.kind == "chi_color":
        return tuple(range(cls.chi * mu))
    if cls.kind == "chi_or":
        return tuple(p * (mu + 1) + i for p in range(cls.chi) for i in range(mu))
    if cls.kind == "ceq":
        return tuple(b * (mu + 1) + i for b in range(mu) for i in range(mu))
    if cls.kind == "n_tree":
        big = make_canonical(cls, mu + 1)
        kids = tree_children(big)
        keep = []

        def walk(v):
            keep.append(v)
            for c in kids[v][:mu]:
                walk(c)

        walk(0)
        return tuple(sorted(keep))
    raise AssertionError(cls.kind)


def test_doc_roundtrip():
    for cls in SMALL_KINDS:
        for seed in range(10):
            s = random_member(cls, random.Random(seed))
            assert from_doc(to_doc(s)) == s
