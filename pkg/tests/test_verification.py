"""Verification workflows: edge checks, worklists, tree summaries, assist."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adbl2.backends import ConstantBackend, SelfConsistencyBackend, StubBackend, StubRule
from adbl2.classify import BackendConfig
from adbl2.errors import BackendUnavailable, EmptyTextError, UnknownParentError
from adbl2.kialo import serialize_kialo
from adbl2.model import RelationType, new_tree
from adbl2.verification import (
    AssistVerdict,
    EdgeVerificationFailure,
    VerificationStatus,
    assist_new_argument,
    verify_edge,
    verify_tree,
    verify_worklist,
)

from conftest import random_tree


def config_always(label, margin):
    return BackendConfig(backend=ConstantBackend.always(label, margin))


def margin_for(probability: float) -> float:
    """Raw-score gap whose sigmoid equals the wanted probability."""
    return math.log(probability / (1.0 - probability))


@pytest.fixture
def two_edge_tree():
    tree = new_tree("parent claim")
    support = tree.add_argument(tree.root, "supports it", RelationType.SUPPORT)
    attack = tree.add_argument(tree.root, "attacks it", RelationType.ATTACK)
    return tree, support, attack


class TestVerifyEdge:
    def test_confirmed(self, two_edge_tree):
        tree, support, _ = two_edge_tree
        config = config_always(RelationType.SUPPORT, margin_for(0.9))
        result = verify_edge(tree, tree.edge_of(support), config, confidence_floor=0.6)
        assert result.status is VerificationStatus.CONFIRMED
        assert result.probability_of_stored == pytest.approx(0.9, abs=1e-12)
        assert result.stored is RelationType.SUPPORT
        assert result.predicted is RelationType.SUPPORT

    def test_mismatch_regardless_of_floor(self, two_edge_tree):
        tree, support, _ = two_edge_tree
        config = config_always(RelationType.ATTACK, margin_for(0.99))
        for floor in (0.5, 0.6, 0.99):
            result = verify_edge(tree, tree.edge_of(support), config, floor)
            assert result.status is VerificationStatus.MISMATCH

    def test_low_confidence_boundary(self, two_edge_tree):
        tree, _, attack = two_edge_tree
        config = config_always(RelationType.ATTACK, margin_for(0.55))
        result = verify_edge(tree, tree.edge_of(attack), config, confidence_floor=0.6)
        assert result.predicted is result.stored is RelationType.ATTACK
        assert result.probability_of_stored == pytest.approx(0.55, abs=1e-9)
        assert result.status is VerificationStatus.LOW_CONFIDENCE

    def test_floor_at_exact_probability_confirms(self, two_edge_tree):
        tree, _, attack = two_edge_tree
        config = config_always(RelationType.ATTACK, margin_for(0.6))
        result = verify_edge(tree, tree.edge_of(attack), config, confidence_floor=0.6)
        assert result.status is VerificationStatus.CONFIRMED

    def test_floor_validation(self, two_edge_tree):
        tree, support, _ = two_edge_tree
        config = config_always(RelationType.SUPPORT, 1.0)
        for bad in (0.49, 1.0, 1.5):
            with pytest.raises(ValueError):
                verify_edge(tree, tree.edge_of(support), config, confidence_floor=bad)


class FlakyBackend:
    """Fails whenever the prompt mentions the poisoned marker."""

    backend_id = "flaky"

    def __init__(self, marker: str):
        self.marker = marker

    def score(self, prompt, continuations):
        if self.marker in prompt:
            raise BackendUnavailable("flaky backend refused")
        return 1.0, -1.0


class TestVerifyWorklist:
    def test_empty(self, two_edge_tree):
        tree, _, _ = two_edge_tree
        config = config_always(RelationType.SUPPORT, 1.0)
        assert verify_worklist(tree, [], config) == []

    def test_order_preserved(self):
        tree = new_tree("root")
        mid = tree.add_argument(tree.root, "mid", RelationType.SUPPORT)
        for i in range(3):
            tree.add_argument(mid, f"leaf {i}", RelationType.ATTACK)
        worklist = tree.edit_argument_text(mid, "mid edited")
        config = BackendConfig(backend=SelfConsistencyBackend.from_tree(tree))
        results = verify_worklist(tree, worklist, config)
        assert len(results) == 4
        assert [r.edge for r in results] == worklist

    def test_one_failure_does_not_abort(self):
        tree = new_tree("root")
        ids = [tree.add_argument(tree.root, f"claim number {i}", RelationType.ATTACK)
               for i in range(3)]
        config = BackendConfig(backend=FlakyBackend("claim number 1"))
        results = verify_worklist(tree, tree.edges, config)
        assert len(results) == 3
        failures = [r for r in results if isinstance(r, EdgeVerificationFailure)]
        assert len(failures) == 1
        assert failures[0].edge.child == ids[1]
        assert "refused" in failures[0].error


class TestVerifyTree:
    def test_single_node_tree(self):
        tree = new_tree("alone")
        config = config_always(RelationType.SUPPORT, 1.0)
        summary = verify_tree(tree, config)
        assert (summary.total, summary.confirmed, summary.mismatched,
                summary.low_confidence) == (0, 0, 0, 0)
        assert summary.results == []

    def test_self_consistency_oracle_confirms_everything(self):
        rng = random.Random(21)
        tree = random_tree(rng, max_nodes=40)
        config = BackendConfig(backend=SelfConsistencyBackend.from_tree(tree))
        summary = verify_tree(tree, config)
        assert summary.total == len(tree.edges)
        assert summary.mismatched == 0
        assert summary.confirmed == summary.total
        for result in summary.results:
            assert result.probability_of_stored == 1.0

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=9999))
    def test_counts_partition_total(self, seed):
        rng = random.Random(seed)
        tree = random_tree(rng, max_nodes=25)
        backend = StubBackend([
            StubRule("a", RelationType.SUPPORT, margin_for(0.55)),
            StubRule("", RelationType.ATTACK, margin_for(0.9)),
        ])
        summary = verify_tree(tree, BackendConfig(backend=backend))
        assert summary.confirmed + summary.mismatched + summary.low_confidence == summary.total
        assert summary.total == len(tree.edges)


class TestAssist:
    def test_achieves(self, two_edge_tree):
        tree, _, _ = two_edge_tree
        config = config_always(RelationType.SUPPORT, margin_for(0.93))
        feedback = assist_new_argument(
            tree, tree.root, "a supportive draft", RelationType.SUPPORT, config, 0.6)
        assert feedback.verdict is AssistVerdict.ACHIEVES
        assert feedback.p_intended == pytest.approx(0.93, abs=1e-9)
        assert feedback.suggestion

    def test_misses_with_suggestion(self, two_edge_tree):
        tree, _, _ = two_edge_tree
        config = config_always(RelationType.SUPPORT, margin_for(0.69))
        feedback = assist_new_argument(
            tree, tree.root, "a weak attack draft", RelationType.ATTACK, config, 0.6)
        assert feedback.verdict is AssistVerdict.MISSES
        assert feedback.p_intended == pytest.approx(0.31, abs=1e-9)
        assert "explicit" in feedback.suggestion

    def test_assist_never_mutates_tree(self, two_edge_tree):
        tree, _, _ = two_edge_tree
        before = serialize_kialo(tree, title="t")
        config = config_always(RelationType.SUPPORT, 2.0)
        for _ in range(2):
            assist_new_argument(tree, tree.root, "draft", RelationType.SUPPORT, config)
        assert serialize_kialo(tree, title="t") == before

    def test_errors(self, two_edge_tree):
        tree, _, _ = two_edge_tree
        config = config_always(RelationType.SUPPORT, 2.0)
        with pytest.raises(UnknownParentError):
            assist_new_argument(tree, "ghost", "draft", RelationType.SUPPORT, config)
        with pytest.raises(EmptyTextError):
            assist_new_argument(tree, tree.root, "  ", RelationType.SUPPORT, config)


def test_verify_never_mutates_tree():
    rng = random.Random(3)
    tree = random_tree(rng, max_nodes=20)
    before = serialize_kialo(tree)
    config = BackendConfig(backend=ConstantBackend(1.0, -1.0))
    verify_tree(tree, config)
    assert serialize_kialo(tree) == before
