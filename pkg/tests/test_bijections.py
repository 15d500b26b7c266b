"""Hand-traced vectors and round-trip properties for the growth maps.

The small exhaustive sweeps live in test_oracle / test_acceptance; here we
pin concrete inputs whose outputs were worked out by hand, then let
hypothesis batter the round trip on bigger random instances.
"""

import pytest
from hypothesis import given, settings, strategies as st

from darygrow.bijections import (
    LEFT,
    RIGHT,
    add_root,
    add_root_inv,
    cut,
    cut_inv,
    enlarge,
    enlarge_trace,
    reduce,
    remy_enlarge,
    rotate,
    rotate_inv,
    third_enlarge,
)
from darygrow.errors import (
    ArityError,
    MarkCountError,
    NotExcursionError,
    RootSurgeryError,
)
from darygrow.marks import (
    Bud,
    EdgeMarkedTree,
    LeafMarkedTree,
    MarkedForest,
    is_excursion_forest,
    leaf_sequence,
)
from darygrow.sampler import SplitMix64, make_kernel, sample_mark_set
from darygrow.tree import DaryTree, new_root_tree


def tree(d, text):
    return DaryTree.from_code_text(d, text)


def edge_marked(d, text, buds=(), edges=()):
    return EdgeMarkedTree.from_words(tree(d, text), buds, edges)


def leaf_marked(d, text, leaves):
    return LeafMarkedTree.from_words(tree(d, text), leaves)


def singleton(d, marked=False):
    t = new_root_tree(d)
    return LeafMarkedTree(t, (t.root,) if marked else ())


# ----------------------------------------------------------------------
# cut


class TestCut:
    def test_all_buds_at_n0(self):
        x = edge_marked(3, "0", buds=[0, 1])
        for a in (1, 2, 3):
            f, out_a = cut(x, a)
            assert out_a == a  # letter passes through untouched
            assert leaf_sequence(f).values == (0, 0, 0, -1)
            assert [len(t.marked_leaves) for t in f.trees] == [1, 1, 0]
            assert all(t.tree.node_count == 1 for t in f.trees)

    def test_single_edge_mark_binary(self):
        x = edge_marked(2, "2 0 0", edges=[(1,)])
        f, _ = cut(x, 1)
        # detached subtree of node 1 lands at the largest position
        assert f.trees[1].key() == singleton(2).key()
        # the working tree keeps a marked stub leaf where node 1 was
        assert f.trees[0].key() == leaf_marked(2, "2 0 0", [(1,)]).key()
        assert leaf_sequence(f).values == (0, 0, -1)
        assert is_excursion_forest(f)

    def test_detaches_lex_largest_first(self):
        # two marked edges: (2,) must be detached before (1, 1)
        x = edge_marked(3, "3 3 0 0 0 0 0", edges=[(1, 1), (2,)])
        details = []
        f, _ = cut(x, 2, details=details)
        assert [step["edge"] for step in details] == ["2", "11"]
        assert [step["position"] for step in details] == [2, 1]
        assert is_excursion_forest(f)

    def test_nested_marks_detach_deepest_first(self):
        # (2, 1) is lex-larger than its ancestor (2,), so it detaches first;
        # its stub leaf then rides along inside the (2,) subtree
        x = edge_marked(3, "3 0 3 0 0 0 0", edges=[(2,), (2, 1)])
        details = []
        f, _ = cut(x, 1, details=details)
        assert [step["edge"] for step in details] == ["21", "2"]
        assert f.trees[2].key() == singleton(3).key()
        assert f.trees[1].mark_words() == ((1,),)  # stub, relabelled
        assert f.trees[0].mark_words() == ((2,),)  # stub left in the trunk

    def test_output_always_excursion(self):
        rng = SplitMix64(2024)
        for d in (2, 3, 4):
            k = make_kernel(d, 77 + d)
            k.steps(30)
            t = DaryTree.from_preorder_code(d, k.preorder_code())
            for _ in range(25):
                x = EdgeMarkedTree(t, tuple(sample_mark_set(rng, t)))
                f, _ = cut(x, 1 + rng.uniform_below(d))
                assert is_excursion_forest(f)

    def test_wrong_mark_count(self):
        with pytest.raises(MarkCountError):
            cut(edge_marked(3, "0", buds=[0]), 1)


# ----------------------------------------------------------------------
# rotate


def five_forest():
    """d=5 forest with 4 marks on the position-0 tree, rest singletons."""
    heavy = leaf_marked(5, "5 0 0 0 0 0", [(1,), (2,), (3,), (4,)])
    return MarkedForest((heavy,) + tuple(singleton(5) for _ in range(4)))


class TestRotate:
    def test_shift_by_two(self):
        f = five_forest()
        g = rotate(f, 2)
        expected = (f.trees[2], f.trees[3], f.trees[4], f.trees[0], f.trees[1])
        assert g.key() == MarkedForest(expected).key()

    def test_full_shift_is_identity(self):
        f = five_forest()
        assert rotate(f, 5).key() == f.key()

    def test_leaf_sequence_rotates_with_the_forest(self):
        f = five_forest()
        s = leaf_sequence(f)
        for a in range(1, 6):
            assert leaf_sequence(rotate(f, a)) == s.rot(a % 5)

    def test_letter_out_of_range(self):
        with pytest.raises(ArityError):
            rotate(five_forest(), 6)

    def test_inv_of_excursion_is_identity_with_letter_d(self):
        f = five_forest()  # leaf sequence (0,3,2,1,0,-1): an excursion
        g, a = rotate_inv(f)
        assert a == 5
        assert g.key() == f.key()

    def test_inv_round_trip_all_letters(self):
        f = five_forest()
        for a in range(1, 6):
            g, back_a = rotate_inv(rotate(f, a))
            assert (g.key(), back_a) == (f.key(), a)


# ----------------------------------------------------------------------
# add_root


class TestAddRoot:
    def test_hangs_positions_in_order(self):
        f = MarkedForest((singleton(3, True), singleton(3, True), singleton(3)))
        out = add_root(f)
        assert out.key() == leaf_marked(3, "3 0 0 0", [(1,), (2,)]).key()

    def test_internal_count_grows_by_one(self):
        f = five_forest()
        assert add_root(f).tree.internal_count == sum(
            t.tree.internal_count for t in f.trees
        ) + 1

    def test_inv_decomposes_by_slot(self):
        out = add_root_inv(leaf_marked(3, "3 0 0 0", [(1,), (3,)]))
        assert [len(t.marked_leaves) for t in out.trees] == [1, 0, 1]
        assert all(t.tree.node_count == 1 for t in out.trees)

    def test_inv_rejects_bare_root(self):
        with pytest.raises(RootSurgeryError):
            add_root_inv(singleton(3, True))

    def test_inv_of_add_root(self):
        f = five_forest()
        assert add_root_inv(add_root(f)).key() == f.key()


# ----------------------------------------------------------------------
# enlarge / reduce


class TestEnlargeReduce:
    def test_seed_tree_letter_3(self):
        x = edge_marked(3, "0", buds=[0, 1])
        out = enlarge(x, 3)
        assert out.key() == leaf_marked(3, "3 0 0 0", [(1,), (2,)]).key()

    def test_seed_tree_letter_1(self):
        x = edge_marked(3, "0", buds=[0, 1])
        out = enlarge(x, 1)
        assert out.key() == leaf_marked(3, "3 0 0 0", [(1,), (3,)]).key()

    def test_reduce_recovers_seed(self):
        y = leaf_marked(3, "3 0 0 0", [(1,), (2,)])
        x, a = reduce(y)
        assert a == 3
        assert x.key() == edge_marked(3, "0", buds=[0, 1]).key()

    def test_letter_out_of_range(self):
        with pytest.raises(ArityError):
            enlarge(edge_marked(3, "0", buds=[0, 1]), 4)

    def test_reduce_non_excursion_never_happens_from_enlarge(self):
        # reduce must reject a hand-built forest that rotates badly; build a
        # leaf-marked tree whose root decomposition is already excursion type
        y = leaf_marked(2, "2 2 0 0 0", [(1, 1)])
        x, a = reduce(y)
        assert enlarge(x, a).key() == y.key()

    def test_trace_has_three_frames(self):
        x = edge_marked(3, "0", buds=[0, 1])
        out, frames = enlarge_trace(x, 3)
        assert [fr["map"] for fr in frames] == ["cut", "rotate", "add_root"]
        assert frames[0]["leaf_sequence"] == "0,0,0,-1"
        assert frames[1]["letter"] == 3
        assert out.key() == leaf_marked(3, "3 0 0 0", [(1,), (2,)]).key()

    @given(st.integers(2, 5), st.integers(1, 60), st.integers(0, 2**30))
    @settings(max_examples=40, deadline=None)
    def test_round_trip_random(self, d, n, seed):
        k = make_kernel(d, seed)
        k.steps(n)
        t = DaryTree.from_preorder_code(d, k.preorder_code())
        rng = SplitMix64(seed ^ 0xD1CE)
        x = EdgeMarkedTree(t, tuple(sample_mark_set(rng, t)))
        a = 1 + rng.uniform_below(d)
        y = enlarge(x, a)
        assert y.tree.internal_count == n + 1
        assert len(y.marked_leaves) == d - 1
        back, back_a = reduce(y)
        assert back_a == a
        assert back.key() == x.key()

    @given(st.integers(2, 4), st.integers(1, 40), st.integers(0, 2**30))
    @settings(max_examples=30, deadline=None)
    def test_other_direction_round_trip(self, d, n, seed):
        # reduce then enlarge is also the identity
        k = make_kernel(d, seed + 31)
        k.steps(n)
        t = DaryTree.from_preorder_code(d, k.preorder_code())
        rng = SplitMix64(seed)
        leaves = sorted(t.leaf_ids())
        chosen = set()
        while len(chosen) < d - 1:
            chosen.add(leaves[rng.uniform_below(len(leaves))])
        y = LeafMarkedTree(t, tuple(chosen))
        x, a = reduce(y)
        assert enlarge(x, a).key() == y.key()


# ----------------------------------------------------------------------
# cut_inv corner cases


class TestCutInv:
    def test_rejects_non_excursion(self):
        f = MarkedForest((singleton(3), singleton(3, True), singleton(3, True)))
        with pytest.raises(NotExcursionError):
            cut_inv(f, 1)

    def test_round_trips_the_cut_examples(self):
        for x, a in [
            (edge_marked(3, "0", buds=[0, 1]), 2),
            (edge_marked(2, "2 0 0", edges=[(1,)]), 1),
            (edge_marked(3, "3 3 0 0 0 0 0", edges=[(1, 1), (2,)]), 3),
        ]:
            f, fa = cut(x, a)
            back, back_a = cut_inv(f, fa)
            assert back_a == a
            assert back.key() == x.key()


# ----------------------------------------------------------------------
# binary variants


class TestBinaryVariants:
    def test_remy_bud_right(self):
        x = edge_marked(2, "0", buds=[0])
        out = remy_enlarge(x, RIGHT)
        assert out.key() == leaf_marked(2, "2 0 0", [(2,)]).key()

    def test_remy_bud_left(self):
        x = edge_marked(2, "0", buds=[0])
        out = remy_enlarge(x, LEFT)
        assert out.key() == leaf_marked(2, "2 0 0", [(1,)]).key()

    def test_remy_edge_splits_in_the_middle(self):
        x = edge_marked(2, "2 0 0", edges=[(1,)])
        out = remy_enlarge(x, RIGHT)
        # new node in the edge above node 1; old subtree on the left,
        # fresh marked leaf on the right
        assert out.key() == leaf_marked(2, "2 2 0 0 0", [(1, 2)]).key()

    def test_third_bud_matches_remy(self):
        x = edge_marked(2, "0", buds=[0])
        for a in (RIGHT, LEFT):
            assert third_enlarge(x, a).key() == remy_enlarge(x, a).key()

    def test_third_edge_at_root_creates_new_root(self):
        x = edge_marked(2, "2 0 0", edges=[(1,)])
        out = third_enlarge(x, RIGHT)
        assert out.tree.internal_count == 2
        assert out.key() == leaf_marked(2, "2 2 0 0 0", [(1, 1)]).key()

    def test_binary_only(self):
        x = edge_marked(3, "0", buds=[0, 1])
        with pytest.raises(ArityError):
            remy_enlarge(x, RIGHT)
        with pytest.raises(ArityError):
            third_enlarge(x, LEFT)

    def test_letter_must_be_binary(self):
        x = edge_marked(2, "0", buds=[0])
        with pytest.raises(ArityError):
            remy_enlarge(x, 1)

    def test_remy_multiplicity_at_n2(self):
        # every shape of size 3 shows up as image tree exactly 4 times
        from darygrow.oracle import enumerate_inputs

        hits = {}
        for x, a in enumerate_inputs(2, 2):
            side = RIGHT if a == 1 else LEFT
            out = remy_enlarge(x, side)
            shape = tuple(out.tree.to_preorder_code())
            hits[shape] = hits.get(shape, 0) + 1
        assert len(hits) == 5
        assert set(hits.values()) == {4}
