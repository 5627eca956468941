"""Tree model operations and structural invariants."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adbl2.errors import (
    CannotRemoveRootError,
    EmptyTextError,
    NoParentEdgeError,
    UnknownArgumentError,
    UnknownParentError,
)
from adbl2.model import DebateTree, RelationType, new_tree

from conftest import bfs_depths, random_tree


class TestNewTree:
    def test_minimal_tree(self):
        tree = new_tree("Thesis")
        assert len(tree) == 1
        assert tree.edges == []
        assert tree.argument(tree.root).text == "Thesis"

    def test_blank_text_rejected(self):
        with pytest.raises(EmptyTextError):
            new_tree("")
        with pytest.raises(EmptyTextError):
            new_tree("   ")

    def test_text_stored_trimmed(self):
        tree = new_tree("  x  ")
        assert tree.argument(tree.root).text == "x"


class TestAddArgument:
    def test_single_insertion(self):
        tree = new_tree("T")
        child = tree.add_argument(tree.root, "A", RelationType.SUPPORT)
        assert tree.depth(child) == 1
        edge = tree.edge_of(child)
        assert edge.relation is RelationType.SUPPORT
        assert edge.parent == tree.root

    def test_unknown_parent(self):
        tree = new_tree("T")
        with pytest.raises(UnknownParentError):
            tree.add_argument("nope", "A", RelationType.ATTACK)

    def test_chain_depths(self):
        # Oracle: walk parent edges by hand and count the hops.
        tree = new_tree("T")
        a = tree.add_argument(tree.root, "a", RelationType.SUPPORT)
        b = tree.add_argument(a, "b", RelationType.ATTACK)
        c = tree.add_argument(b, "c", RelationType.SUPPORT)
        for node, expected in [(a, 1), (b, 2), (c, 3)]:
            hops, cursor = 0, node
            while (edge := tree.edge_of(cursor)) is not None:
                cursor = edge.parent
                hops += 1
            assert hops == expected
            assert tree.depth(node) == expected

    def test_empty_text(self):
        tree = new_tree("T")
        with pytest.raises(EmptyTextError):
            tree.add_argument(tree.root, " ", RelationType.SUPPORT)


class TestEditArgumentText:
    def test_leaf_returns_one_edge(self):
        tree = new_tree("T")
        leaf = tree.add_argument(tree.root, "a", RelationType.SUPPORT)
        worklist = tree.edit_argument_text(leaf, "a2")
        assert len(worklist) == 1
        assert tree.argument(leaf).text == "a2"

    def test_internal_node_counts_incident_edges(self):
        tree = new_tree("T")
        mid = tree.add_argument(tree.root, "mid", RelationType.SUPPORT)
        for i in range(3):
            tree.add_argument(mid, f"child {i}", RelationType.ATTACK)
        worklist = tree.edit_argument_text(mid, "edited")
        # Oracle: enumerate incident edges directly.
        incident = [e for e in tree.edges if mid in (e.child, e.parent)]
        assert len(worklist) == len(incident) == 4

    def test_root_edit_returns_child_edges_only(self):
        tree = new_tree("T")
        tree.add_argument(tree.root, "a", RelationType.SUPPORT)
        tree.add_argument(tree.root, "b", RelationType.ATTACK)
        worklist = tree.edit_argument_text(tree.root, "T2")
        assert len(worklist) == 2

    def test_errors(self):
        tree = new_tree("T")
        with pytest.raises(UnknownArgumentError):
            tree.edit_argument_text("nope", "x")
        with pytest.raises(EmptyTextError):
            tree.edit_argument_text(tree.root, "  ")


class TestRemoveArgument:
    def test_remove_leaf(self):
        tree = new_tree("T")
        leaf = tree.add_argument(tree.root, "a", RelationType.SUPPORT)
        assert tree.remove_argument(leaf) == 1
        assert leaf not in tree

    def test_remove_subtree_count(self):
        tree = new_tree("T")
        mid = tree.add_argument(tree.root, "mid", RelationType.SUPPORT)
        kid = tree.add_argument(mid, "kid", RelationType.ATTACK)
        tree.add_argument(kid, "grandkid", RelationType.SUPPORT)
        # Oracle: independent recursive subtree size.
        def subtree_size(node):
            return 1 + sum(subtree_size(child) for child in tree.children(node))
        expected = subtree_size(mid)
        assert tree.remove_argument(mid) == expected == 3
        tree.check_invariants()

    def test_remove_root_rejected(self):
        tree = new_tree("T")
        with pytest.raises(CannotRemoveRootError):
            tree.remove_argument(tree.root)

    def test_random_subtree_sizes(self):
        rng = random.Random(7)
        for _ in range(20):
            tree = random_tree(rng, max_nodes=40)
            victims = [a for a in tree.arguments if a != tree.root]
            if not victims:
                continue
            victim = rng.choice(victims)
            expected = len(tree.subtree_ids(victim))
            before = len(tree)
            assert tree.remove_argument(victim) == expected
            assert len(tree) == before - expected
            tree.check_invariants()


class TestDepth:
    def test_root_depth_zero(self):
        tree = new_tree("T")
        assert tree.depth(tree.root) == 0

    def test_chain(self):
        tree = new_tree("r")
        a = tree.add_argument(tree.root, "a", RelationType.SUPPORT)
        b = tree.add_argument(a, "b", RelationType.ATTACK)
        assert tree.depth(b) == 2

    def test_agrees_with_bfs_oracle(self):
        rng = random.Random(13)
        tree = random_tree(rng, max_nodes=50)
        oracle = bfs_depths(tree)
        for argument_id in tree.arguments:
            assert tree.depth(argument_id) == oracle[argument_id]

    def test_unknown(self):
        tree = new_tree("T")
        with pytest.raises(UnknownArgumentError):
            tree.depth("ghost")


class TestEdgeOfAndSetRelation:
    def test_root_has_no_parent_edge(self):
        tree = new_tree("T")
        assert tree.edge_of(tree.root) is None

    def test_non_root_has_exactly_one(self):
        tree = new_tree("T")
        child = tree.add_argument(tree.root, "a", RelationType.ATTACK)
        edge = tree.edge_of(child)
        assert edge is not None and edge.child == child

    def test_flip_is_visible(self):
        tree = new_tree("T")
        child = tree.add_argument(tree.root, "a", RelationType.ATTACK)
        previous = tree.set_relation(child, RelationType.SUPPORT)
        assert previous is RelationType.ATTACK
        assert tree.edge_of(child).relation is RelationType.SUPPORT

    def test_set_relation_on_root_rejected(self):
        tree = new_tree("T")
        with pytest.raises(NoParentEdgeError):
            tree.set_relation(tree.root, RelationType.SUPPORT)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_invariants_survive_random_operation_sequences(seed):
    rng = random.Random(seed)
    tree = new_tree("thesis")
    ids = [tree.root]
    for step in range(rng.randint(1, 60)):
        op = rng.random()
        target = rng.choice(ids)
        if op < 0.55:
            ids.append(tree.add_argument(
                target, f"claim {step}", rng.choice(list(RelationType))))
        elif op < 0.75:
            tree.edit_argument_text(target, f"edited {step}")
        elif op < 0.9 and target != tree.root:
            tree.set_relation(target, rng.choice(list(RelationType)))
        elif target != tree.root:
            tree.remove_argument(target)
            ids = list(tree.arguments)
        tree.check_invariants()
        # |A| = |S| + |C| + 1
        assert len(tree) == len(tree.edges) + 1
        for edge in tree.edges:
            assert tree.depth(edge.child) == tree.depth(edge.parent) + 1


def test_relation_type_total_order():
    assert RelationType.ATTACK < RelationType.SUPPORT
    assert sorted([RelationType.SUPPORT, RelationType.ATTACK])[0] is RelationType.ATTACK
