"""Tree structure, Newick parsing, rooting, joins and decompositions."""

import pytest

from phyloinv.errors import InvalidTreeError, NewickParseError
from phyloinv.trees import (Tree, canonical_rooting, contract_interior_edge,
                            decompose_at_edge, is_contraction, join,
                            parse_newick, root_at, tree_to_json)


def tripod():
    return parse_newick("(1,2,3);")


def quartet():
    return parse_newick("((1,2),(3,4));")


class TestParsing:
    def test_tripod(self):
        t = tripod()
        assert t.leaf_count == 3
        assert t.edge_count == 3
        assert t.interior_node_count == 1
        assert t.is_claw

    def test_quartet(self):
        t = quartet()
        assert t.leaf_count == 4
        assert t.edge_count == 5
        assert t.interior_node_count == 2
        assert not t.is_claw
        assert t.is_trivalent

    def test_root_of_degree_two_is_suppressed(self):
        # "((1,2),(3,4));" puts a binary node at the top; the resulting
        # unrooted tree must still have all interior valencies >= 3
        t = quartet()
        assert all(t.degree(v) >= 3 for v in t.interior_nodes)

    def test_claw_from_newick(self):
        t = parse_newick("(1,2,3,4,5);")
        assert t.is_claw
        assert t.interior_node_count == 1

    def test_whitespace_and_lengths_tolerated(self):
        t = parse_newick(" ( (1:0.1, 2:0.2) : 1.5, (3,4), 5 ) ; ")
        assert t.leaf_count == 5

    def test_caterpillar(self):
        t = parse_newick("((((1,2),3),4),(5,6));")
        assert t.leaf_count == 6
        assert t.edge_count == 9
        assert t.is_trivalent

    @pytest.mark.parametrize("bad,frag", [
        ("", "expected"),
        ("(1,2,3)", "expected ';'"),
        ("(1,2,3));", "expected ';'"),
        ("((1,2,3);", "expected"),
        ("(1,2,,3);", "expected"),
        ("(1,2,3;);", "expected"),
        ("(1,x,3);", "expected"),
        ("(1,2,3);junk", "trailing"),
    ])
    def test_syntax_errors(self, bad, frag):
        with pytest.raises(NewickParseError) as exc:
            parse_newick(bad)
        assert frag in str(exc.value)

    def test_error_carries_position(self):
        with pytest.raises(NewickParseError) as exc:
            parse_newick("(1,2,,3);")
        assert exc.value.position == 5

    def test_duplicate_labels(self):
        with pytest.raises(InvalidTreeError, match="duplicate leaf label"):
            parse_newick("(1,2,2);")

    def test_labels_must_cover_range(self):
        with pytest.raises(InvalidTreeError, match="1..3"):
            parse_newick("(1,2,4);")

    def test_two_leaves_rejected(self):
        with pytest.raises(InvalidTreeError, match="fewer than 3"):
            parse_newick("(1,2);")

    def test_inner_degree_two_rejected(self):
        # ((1),2,3); has a valency-2 interior node above leaf 1
        with pytest.raises(NewickParseError):
            parse_newick("((1),2,3);")


class TestTree:
    def test_validation_rejects_degree_two_interior(self):
        with pytest.raises(InvalidTreeError):
            Tree(3, [(1, 4), (4, 5), (5, 2), (5, 3)])

    def test_validation_rejects_disconnected(self):
        with pytest.raises(InvalidTreeError):
            Tree(4, [(1, 5), (2, 5), (3, 6), (4, 6), (5, 5)])

    def test_validation_rejects_leaf_valency(self):
        with pytest.raises(InvalidTreeError):
            Tree(3, [(1, 2), (1, 3), (1, 4)])

    def test_splits_quartet(self):
        t = quartet()
        pairs = {frozenset(s) for s in t.splits() if len(s) == 2}
        assert frozenset({1, 2}) in pairs or frozenset({3, 4}) in pairs

    def test_canonical_newick_roundtrip(self):
        for text in ["(1,2,3);", "((1,2),(3,4));", "((((1,2),3),4),(5,6));",
                     "(1,2,3,4,5);", "((1,2),(3,4),5);"]:
            t = parse_newick(text)
            again = parse_newick(t.canonical_newick())
            assert again == t

    def test_label_respecting_equality(self):
        a = parse_newick("((1,2),(3,4));")
        b = parse_newick("((3,4),(1,2));")
        c = parse_newick("((1,3),(2,4));")
        assert a == b
        assert a != c


class TestRooting:
    def test_canonical_root_is_neighbor_of_leaf_one(self):
        t = quartet()
        rt = canonical_rooting(t)
        assert rt.root in t.neighbors(1)

    def test_edge_order_pendants_first(self):
        rt = canonical_rooting(parse_newick("((1,2),(3,4));"))
        kids = [child for _, child in rt.edges[:4]]
        assert kids == [1, 2, 3, 4]
        assert len(rt.interior_edges()) == 1

    def test_leaves_below(self):
        rt = canonical_rooting(parse_newick("((1,2),(3,4));"))
        (parent, child) = rt.interior_edges()[0]
        assert rt.leaves_below[child] in ((1, 2), (3, 4))

    def test_reroot_preserves_edge_set(self):
        t = parse_newick("((((1,2),3),4),(5,6));")
        for v in t.interior_nodes:
            rt = root_at(t, v)
            assert {frozenset(e) for e in rt.edges} == \
                   {frozenset(e) for e in t.edges}

    def test_json_shape(self):
        d = tree_to_json(canonical_rooting(tripod()))
        assert d["leaves"] == 3
        assert len(d["edges"]) == 3
        assert all(parent == 4 for parent, _ in d["edges"])


class TestJoinDecompose:
    def test_join_two_tripods_is_quartet(self):
        t = parse_newick("(1,2,3);")
        ctx = join(t, 3, t, 3)
        assert ctx.tree == quartet()
        u, v = ctx.eps
        assert u in ctx.tree.interior_nodes and v in ctx.tree.interior_nodes
        assert sorted(ctx.leaf_map1.values()) == [1, 2]
        assert sorted(ctx.leaf_map2.values()) == [3, 4]

    def test_join_leaf_relabelling(self):
        t1 = parse_newick("(1,2,3);")
        ctx = join(t1, 1, t1, 2)
        # leaves 2,3 of the first part keep ascending order as 1,2
        assert ctx.leaf_map1 == {2: 1, 3: 2}
        assert ctx.leaf_map2 == {1: 3, 3: 4}

    def test_decompose_inverts_join(self):
        t = parse_newick("((((1,2),3),4),(5,6));")
        rt = canonical_rooting(t)
        for edge in rt.interior_edges():
            ctx = decompose_at_edge(rt, edge)
            side1 = set(ctx.side1_labels())
            side2 = set(ctx.side2_labels())
            assert side1 | side2 == set(range(1, 7))
            assert side1.isdisjoint(side2)
            # parts are genuine trees with >= 3 leaves each
            assert ctx.t1.tree.leaf_count >= 3
            assert ctx.t2.tree.leaf_count >= 3
            rebuilt = join(ctx.t1.tree, ctx.v1, ctx.t2.tree, ctx.v2)
            assert rebuilt.tree.leaf_count == 6

    def test_decompose_rejects_pendant_edge(self):
        rt = canonical_rooting(quartet())
        with pytest.raises(InvalidTreeError):
            decompose_at_edge(rt, rt.edges[0])

    def test_contract_and_is_contraction(self):
        big = parse_newick("((1,2),(3,4));")
        inner = next(e for e in big.edges if e[0] > 4 and e[1] > 4)
        small = contract_interior_edge(big, inner)
        assert small.is_claw
        assert is_contraction(small, big)
        assert not is_contraction(big, small)
