"""Rooted bipolar argumentation trees: arguments plus labeled attack/support edges.

Edges are stored child -> parent. The root has no parent edge; every other
argument has exactly one, so the edge graph is a tree by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import total_ordering
from typing import Iterator, Optional

from .errors import (
    CannotRemoveRootError,
    EmptyTextError,
    NoParentEdgeError,
    UnknownArgumentError,
    UnknownParentError,
)


@total_ordering
class RelationType(Enum):
    """The two labels a child argument can bear toward its parent."""

    ATTACK = "attack"
    SUPPORT = "support"

    def __lt__(self, other: "RelationType") -> bool:
        # Attack sorts before Support; keeps serialization deterministic.
        if not isinstance(other, RelationType):
            return NotImplemented
        return self is RelationType.ATTACK and other is RelationType.SUPPORT

    @classmethod
    def from_string(cls, value: str) -> "RelationType":
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ValueError(f"unknown relation label: {value!r}") from None


@dataclass
class Argument:
    """A single claim in the tree."""

    id: str
    text: str
    meta: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class RelationEdge:
    """Directed edge from a child argument to its parent."""

    child: str
    parent: str
    relation: RelationType


def _clean_text(text: str) -> str:
    cleaned = text.strip()
    if not cleaned:
        raise EmptyTextError("argument text must be non-empty")
    return cleaned


class DebateTree:
    """One debate: an id->Argument map, a root, and one parent edge per non-root.

    Mutations keep three invariants: the root has no parent edge, every other
    argument has exactly one, and every argument reaches the root (acyclic,
    connected). Child order under a parent is insertion order.
    """

    def __init__(self, root_text: str, domain: Optional[str] = None):
        self._ids = itertools.count(1)
        root_id = self._next_id()
        self.arguments: dict[str, Argument] = {root_id: Argument(root_id, _clean_text(root_text))}
        self.root: str = root_id
        self.domain: Optional[str] = domain
        self._parent_edge: dict[str, RelationEdge] = {}
        self._children: dict[str, list[str]] = {root_id: []}

    def _next_id(self) -> str:
        return f"a{next(self._ids)}"

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.arguments)

    def __contains__(self, argument_id: str) -> bool:
        return argument_id in self.arguments

    def argument(self, argument_id: str) -> Argument:
        try:
            return self.arguments[argument_id]
        except KeyError:
            raise UnknownArgumentError(f"no argument {argument_id!r}") from None

    def children(self, argument_id: str) -> list[str]:
        self.argument(argument_id)
        return list(self._children[argument_id])

    def edge_of(self, child_id: str) -> Optional[RelationEdge]:
        """The unique parent edge of ``child_id``, or None for the root."""
        self.argument(child_id)
        return self._parent_edge.get(child_id)

    @property
    def edges(self) -> list[RelationEdge]:
        """All edges, in preorder of their child argument."""
        return [
            self._parent_edge[arg_id]
            for arg_id in self.iter_preorder()
            if arg_id in self._parent_edge
        ]

    def iter_preorder(self) -> Iterator[str]:
        """Yield argument ids root-first, children in insertion order."""
        stack = [self.root]
        while stack:
            current = stack.pop()
            yield current
            stack.extend(reversed(self._children[current]))

    def depth(self, argument_id: str) -> int:
        """Length of the edge path from ``argument_id`` up to the root."""
        self.argument(argument_id)
        steps = 0
        current = argument_id
        while current != self.root:
            current = self._parent_edge[current].parent
            steps += 1
        return steps

    def subtree_ids(self, argument_id: str) -> list[str]:
        """``argument_id`` plus all of its descendants, preorder."""
        self.argument(argument_id)
        collected = []
        stack = [argument_id]
        while stack:
            current = stack.pop()
            collected.append(current)
            stack.extend(reversed(self._children[current]))
        return collected

    def incident_edges(self, argument_id: str) -> list[RelationEdge]:
        """Parent edge (if any) followed by the edges from each child."""
        self.argument(argument_id)
        edges = []
        parent_edge = self._parent_edge.get(argument_id)
        if parent_edge is not None:
            edges.append(parent_edge)
        edges.extend(self._parent_edge[child] for child in self._children[argument_id])
        return edges

    # -- mutations -------------------------------------------------------

    def add_argument(self, parent_id: str, text: str, relation: RelationType) -> str:
        """Insert a new argument under ``parent_id`` and return its id."""
        if parent_id not in self.arguments:
            raise UnknownParentError(f"no argument {parent_id!r}")
        cleaned = _clean_text(text)
        new_id = self._next_id()
        self.arguments[new_id] = Argument(new_id, cleaned)
        self._parent_edge[new_id] = RelationEdge(new_id, parent_id, relation)
        self._children[new_id] = []
        self._children[parent_id].append(new_id)
        return new_id

    def edit_argument_text(self, argument_id: str, new_text: str) -> list[RelationEdge]:
        """Replace the text and return every incident edge for re-verification."""
        argument = self.argument(argument_id)
        argument.text = _clean_text(new_text)
        return self.incident_edges(argument_id)

    def remove_argument(self, argument_id: str) -> int:
        """Remove the argument and its whole subtree; return how many went."""
        self.argument(argument_id)
        if argument_id == self.root:
            raise CannotRemoveRootError("the root argument cannot be removed")
        doomed = self.subtree_ids(argument_id)
        parent_id = self._parent_edge[argument_id].parent
        self._children[parent_id].remove(argument_id)
        for victim in doomed:
            del self.arguments[victim]
            del self._parent_edge[victim]
            del self._children[victim]
        return len(doomed)

    def set_relation(self, child_id: str, relation: RelationType) -> RelationType:
        """Relabel the parent edge of ``child_id``; return the old label."""
        self.argument(child_id)
        edge = self._parent_edge.get(child_id)
        if edge is None:
            raise NoParentEdgeError("the root has no parent edge")
        self._parent_edge[child_id] = RelationEdge(edge.child, edge.parent, relation)
        return edge.relation

    # -- integrity -------------------------------------------------------

    def check_invariants(self) -> None:
        """Raise AssertionError if any structural invariant is broken."""
        assert self.root in self.arguments, "root missing"
        assert self.root not in self._parent_edge, "root has a parent edge"
        for arg_id in self.arguments:
            if arg_id != self.root:
                edge = self._parent_edge.get(arg_id)
                assert edge is not None, f"{arg_id} has no parent edge"
                assert edge.child == arg_id and edge.parent in self.arguments
                assert edge.child != edge.parent, "self-loop"
        reached = set(self.iter_preorder())
        assert reached == set(self.arguments), "tree is not connected"
        assert len(self._parent_edge) == len(self.arguments) - 1


def new_tree(root_text: str, domain: Optional[str] = None) -> DebateTree:
    """Create a tree holding only the (trimmed) root argument."""
    return DebateTree(root_text, domain=domain)
