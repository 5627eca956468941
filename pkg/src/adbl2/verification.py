"""Relation re-verification after edits and assisted drafting of new arguments.

Both workflows are read-only on the tree: verification reports whether the
classifier still agrees with each stored label, and assist feedback tells a
drafting user whether their text lands the intended relation. Applying a
fix is a separate, explicit ``set_relation`` call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

from .classify import BackendConfig, classify
from .errors import BackendError, EmptyTextError, UnknownParentError
from .model import DebateTree, RelationEdge, RelationType


class VerificationStatus(Enum):
    CONFIRMED = "confirmed"
    MISMATCH = "mismatch"
    LOW_CONFIDENCE = "low_confidence"


class AssistVerdict(Enum):
    ACHIEVES = "achieves"
    MISSES = "misses"


@dataclass(frozen=True)
class VerificationResult:
    """Outcome for one edge: stored label versus fresh classification."""

    edge: RelationEdge
    stored: RelationType
    predicted: RelationType
    probability_of_stored: float
    status: VerificationStatus


@dataclass(frozen=True)
class EdgeVerificationFailure:
    """A backend failure for one edge; the rest of the worklist still runs."""

    edge: RelationEdge
    error: str


WorklistEntry = Union[VerificationResult, EdgeVerificationFailure]


@dataclass
class TreeVerificationSummary:
    """Per-tree verification totals; the three counts partition ``total``."""

    total: int = 0
    confirmed: int = 0
    mismatched: int = 0
    low_confidence: int = 0
    results: list[WorklistEntry] = field(default_factory=list)


@dataclass(frozen=True)
class AssistFeedback:
    """Live feedback on a draft argument before it is committed."""

    draft_text: str
    intended: RelationType
    p_intended: float
    verdict: AssistVerdict
    suggestion: str


_ASSIST_HINTS = {
    RelationType.ATTACK: (
        "Make the challenge explicit: name what the parent claims and say "
        "why it is wrong, harmful, or does not follow."
    ),
    RelationType.SUPPORT: (
        "Make the endorsement explicit: restate what the parent claims and "
        "add a reason or piece of evidence in its favor."
    ),
}


def _check_floor(value: float, name: str) -> None:
    if not 0.5 <= value < 1.0:
        raise ValueError(f"{name} must be in [0.5, 1.0), got {value}")


def verify_edge(
    tree: DebateTree,
    edge: RelationEdge,
    config: BackendConfig,
    confidence_floor: float = 0.6,
) -> VerificationResult:
    """Re-classify one stored edge and compare against its label."""
    _check_floor(confidence_floor, "confidence_floor")
    child = tree.argument(edge.child)
    parent = tree.argument(edge.parent)
    outcome = classify(config, parent.text, child.text)
    probability_of_stored = outcome.probability_of(edge.relation)
    if outcome.predicted is not edge.relation:
        status = VerificationStatus.MISMATCH
    elif probability_of_stored >= confidence_floor:
        status = VerificationStatus.CONFIRMED
    else:
        status = VerificationStatus.LOW_CONFIDENCE
    return VerificationResult(
        edge=edge,
        stored=edge.relation,
        predicted=outcome.predicted,
        probability_of_stored=probability_of_stored,
        status=status,
    )


def verify_worklist(
    tree: DebateTree,
    edges: Sequence[RelationEdge],
    config: BackendConfig,
    confidence_floor: float = 0.6,
) -> list[WorklistEntry]:
    """One entry per edge, in input order; backend failures are inline."""
    entries: list[WorklistEntry] = []
    for edge in edges:
        try:
            entries.append(verify_edge(tree, edge, config, confidence_floor))
        except BackendError as exc:
            entries.append(EdgeVerificationFailure(edge=edge, error=str(exc)))
    return entries


def verify_tree(
    tree: DebateTree,
    config: BackendConfig,
    confidence_floor: float = 0.6,
) -> TreeVerificationSummary:
    """Verify every edge in the tree and tally the outcomes."""
    summary = TreeVerificationSummary()
    summary.results = verify_worklist(tree, tree.edges, config, confidence_floor)
    for entry in summary.results:
        if isinstance(entry, EdgeVerificationFailure):
            continue
        summary.total += 1
        if entry.status is VerificationStatus.CONFIRMED:
            summary.confirmed += 1
        elif entry.status is VerificationStatus.MISMATCH:
            summary.mismatched += 1
        else:
            summary.low_confidence += 1
    return summary


def assist_new_argument(
    tree: DebateTree,
    parent_id: str,
    draft_text: str,
    intended: RelationType,
    config: BackendConfig,
    assist_threshold: float = 0.6,
) -> AssistFeedback:
    """Classify a draft against its target parent without touching the tree."""
    _check_floor(assist_threshold, "assist_threshold")
    if parent_id not in tree:
        raise UnknownParentError(f"no argument {parent_id!r}")
    draft = draft_text.strip()
    if not draft:
        raise EmptyTextError("draft text must be non-empty")
    parent = tree.argument(parent_id)
    outcome = classify(config, parent.text, draft)
    p_intended = outcome.probability_of(intended)
    if p_intended >= assist_threshold:
        verdict = AssistVerdict.ACHIEVES
        suggestion = f"Draft reads as {intended.value} at {p_intended:.0%}; ready to commit."
    else:
        verdict = AssistVerdict.MISSES
        suggestion = (
            f"Draft reads as {outcome.predicted.value} "
            f"(p_{intended.value}={p_intended:.2f}). " + _ASSIST_HINTS[intended]
        )
    return AssistFeedback(
        draft_text=draft_text,
        intended=intended,
        p_intended=p_intended,
        verdict=verdict,
        suggestion=suggestion,
    )
