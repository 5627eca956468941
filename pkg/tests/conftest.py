"""Shared generators and the acceptance-criteria reporting hook."""

from __future__ import annotations

import random

from adbl2.model import DebateTree, RelationType

WORDS = (
    "budget", "carbon", "cities", "claims", "courts", "debate", "evidence",
    "funding", "health", "markets", "policy", "privacy", "rights", "schools",
    "science", "sports", "taxes", "voters",
)


def random_text(rng: random.Random, tag: str) -> str:
    picked = " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 6)))
    return f"{tag} {picked}"


def random_tree(
    rng: random.Random,
    max_nodes: int = 30,
    max_depth: int | None = None,
) -> DebateTree:
    """A random valid tree with unique, single-line argument texts."""
    node_count = rng.randint(1, max_nodes)
    tree = DebateTree(random_text(rng, "claim r"))
    ids = [tree.root]
    for index in range(node_count - 1):
        if max_depth is None:
            parent = rng.choice(ids)
        else:
            eligible = [arg for arg in ids if tree.depth(arg) < max_depth]
            parent = rng.choice(eligible)
        relation = rng.choice((RelationType.ATTACK, RelationType.SUPPORT))
        ids.append(tree.add_argument(parent, random_text(rng, f"claim {index}"), relation))
    return tree


def tree_signature(tree: DebateTree, node: str | None = None):
    """Canonical shape of a tree, independent of argument ids."""
    node = node if node is not None else tree.root
    children = []
    for child in tree.children(node):
        edge = tree.edge_of(child)
        children.append((edge.relation.value, tree_signature(tree, child)))
    return tree.argument(node).text, tuple(children)


def bfs_depths(tree: DebateTree) -> dict[str, int]:
    """Independent top-down depth computation via the children lists."""
    depths = {tree.root: 0}
    frontier = [tree.root]
    while frontier:
        next_frontier = []
        for node in frontier:
            for child in tree.children(node):
                depths[child] = depths[node] + 1
                next_frontier.append(child)
        frontier = next_frontier
    return depths


# -- acceptance criteria summary -------------------------------------------

_acceptance_outcomes: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_outcomes.append((name, "PASS" if report.passed else "FAIL"))
    elif report.when == "setup" and report.failed:
        _acceptance_outcomes.append((name, "FAIL"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_outcomes:
        terminalreporter.write_line(f"{outcome}  {name}")
