"""Reader and writer for Kialo-style text outline exports.

The dialect: an optional ``Discussion Title:`` header followed by a blank
line, then one claim per line. Claims carry a dotted outline number ("1.",
"1.2.1.") and, below the thesis, a ``Pro:`` or ``Con:`` stance prefix:

    Discussion Title: Example

    1. Thesis text
    1.1. Pro: supports the thesis
    1.2. Con: attacks the thesis
    1.2.1. Pro: supports 1.2.

Pro lines become support edges to the outline parent, Con lines attack
edges. Lines without an outline number continue the previous claim's text.
``-> See 1.2.3.`` reference lines are skipped with a warning (the tree
model has no multi-parent links).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .model import DebateTree, RelationType

_OUTLINE_RE = re.compile(r"^(\d+(?:\.\d+)*)\.\s+(.*)$")
_HEADER_PREFIX = "Discussion Title:"
_REFERENCE_PREFIX = "-> See"

STANCE_OF_RELATION = {RelationType.SUPPORT: "Pro:", RelationType.ATTACK: "Con:"}
RELATION_OF_STANCE = {stance: rel for rel, stance in STANCE_OF_RELATION.items()}

DEFAULT_DOMAIN_MAP: dict[str, str] = {
    "art": "art",
    "climate-change": "climate change",
    "economics": "economics",
    "entertainment": "entertainment",
    "health": "health",
    "law": "law",
    "lgbtq": "lgbtq",
    "life": "life",
    "politics": "politics",
    "privacy": "privacy",
    "sports": "sports",
    "technology": "technology",
}


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    """One finding tied to an input line; any ERROR aborts tree construction."""

    line_number: int
    severity: Severity
    code: str
    message: str

    def render(self) -> str:
        return f"line {self.line_number}: {self.severity.value}: {self.message}"


@dataclass
class KialoLine:
    """A lexed claim line: outline path, stance keyword (if any), joined text."""

    line_number: int
    path: tuple[int, ...]
    stance: Optional[str]
    text: str


@dataclass
class KialoDocument:
    """Lexed form of an export: header title plus claim lines in file order."""

    title: Optional[str] = None
    lines: list[KialoLine] = field(default_factory=list)


def _lex(text: str) -> tuple[KialoDocument, list[ParseDiagnostic]]:
    document = KialoDocument()
    diagnostics: list[ParseDiagnostic] = []
    saw_claim = False
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip():
            continue
        if not saw_claim and document.title is None and line.startswith(_HEADER_PREFIX):
            document.title = line[len(_HEADER_PREFIX):].strip()
            continue
        match = _OUTLINE_RE.match(line)
        if match is None:
            # Continuation of the previous claim, folded in with one space.
            if document.lines:
                document.lines[-1].text += " " + line.strip()
            else:
                diagnostics.append(ParseDiagnostic(
                    line_number, Severity.ERROR, "OrphanText",
                    "text before the first numbered claim",
                ))
            continue
        saw_claim = True
        path = tuple(int(part) for part in match.group(1).split("."))
        rest = match.group(2).strip()
        stance = None
        for keyword in RELATION_OF_STANCE:
            if rest.startswith(keyword):
                stance = keyword
                rest = rest[len(keyword):].strip()
                break
        document.lines.append(KialoLine(line_number, path, stance, rest))
    return document, diagnostics


def parse_kialo(text: str) -> tuple[Optional[DebateTree], list[ParseDiagnostic]]:
    """Parse an export into a tree; the tree is None if any ERROR was found."""
    document, diagnostics = _lex(text)
    tree: Optional[DebateTree] = None
    seen: set[tuple[int, ...]] = set()
    built: dict[tuple[int, ...], str] = {}

    def error(line: KialoLine, code: str, message: str) -> None:
        diagnostics.append(ParseDiagnostic(line.line_number, Severity.ERROR, code, message))

    for line in document.lines:
        dotted = ".".join(str(part) for part in line.path) + "."
        if line.path in seen:
            error(line, "DuplicateNumber", f"outline number {dotted} already used")
            continue
        seen.add(line.path)
        if line.path == (1,):
            if not line.text:
                error(line, "EmptyText", "thesis line has no text")
                continue
            thesis_text = line.text if line.stance is None else f"{line.stance} {line.text}"
            tree = DebateTree(thesis_text)
            tree.argument(tree.root).meta["source_line"] = str(line.line_number)
            built[line.path] = tree.root
            continue
        if len(line.path) == 1:
            error(line, "DanglingNumber", f"unexpected top-level claim {dotted}; only 1. may appear")
            continue
        parent_path = line.path[:-1]
        if parent_path not in built:
            if parent_path in seen:
                error(line, "DanglingNumber", f"parent of {dotted} was skipped or invalid")
            else:
                parent_dotted = ".".join(str(part) for part in parent_path) + "."
                error(line, "DanglingNumber", f"no parent claim {parent_dotted} for {dotted}")
            continue
        if line.stance is None:
            error(line, "UnknownStance", f"claim {dotted} must start with Pro: or Con:")
            continue
        if line.text.startswith(_REFERENCE_PREFIX):
            diagnostics.append(ParseDiagnostic(
                line.line_number, Severity.WARNING, "DuplicateReference",
                f"skipped duplicate reference at {dotted} ({line.text})",
            ))
            continue
        if not line.text:
            error(line, "EmptyText", f"claim {dotted} has no text")
            continue
        assert tree is not None
        child_id = tree.add_argument(built[parent_path], line.text, RELATION_OF_STANCE[line.stance])
        tree.argument(child_id).meta["source_line"] = str(line.line_number)
        built[line.path] = child_id

    if (1,) not in seen:
        diagnostics.append(ParseDiagnostic(0, Severity.ERROR, "MissingThesis", "no thesis line 1. found"))
    if any(diag.severity is Severity.ERROR for diag in diagnostics):
        return None, diagnostics
    return tree, diagnostics


def read_title(text: str) -> Optional[str]:
    """The header title if the export starts with one, else None."""
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith(_HEADER_PREFIX):
            return line[len(_HEADER_PREFIX):].strip()
        return None
    return None


def _fold(text: str) -> str:
    # The format is line oriented; embedded newlines collapse to one space.
    return re.sub(r"\s*[\r\n]+\s*", " ", text)


def serialize_kialo(tree: DebateTree, title: Optional[str] = None) -> str:
    """Render a tree back to outline text; numbering is recomputed from shape."""
    lines: list[str] = []
    if title is not None:
        lines.append(f"{_HEADER_PREFIX} {title}")
        lines.append("")

    def emit(argument_id: str, path: tuple[int, ...]) -> None:
        dotted = ".".join(str(part) for part in path) + "."
        argument = tree.argument(argument_id)
        if argument_id == tree.root:
            lines.append(f"{dotted} {_fold(argument.text)}")
        else:
            edge = tree.edge_of(argument_id)
            assert edge is not None
            stance = STANCE_OF_RELATION[edge.relation]
            lines.append(f"{dotted} {stance} {_fold(argument.text)}")
        for position, child_id in enumerate(tree.children(argument_id), start=1):
            emit(child_id, path + (position,))

    emit(tree.root, (1,))
    return "\n".join(lines)


def _tokens(value: str) -> list[str]:
    return [token for token in re.split(r"[^a-z0-9]+", value.lower()) if token]


def detect_domain(
    filename_or_header: str,
    mapping: Optional[dict[str, str]] = None,
    override: Optional[str] = None,
) -> Optional[str]:
    """Map a filename or header line to a lowercase domain tag, or None.

    An explicit ``override`` wins. Mapping keys are slugs ("climate-change")
    matched as contiguous token runs, longest key first.
    """
    if override is not None:
        return override.strip().lower() or None
    mapping = DEFAULT_DOMAIN_MAP if mapping is None else mapping
    tokens = _tokens(filename_or_header)
    keyed = sorted(
        ((tuple(_tokens(slug)), tag) for slug, tag in mapping.items()),
        key=lambda item: len(item[0]),
        reverse=True,
    )
    for key, tag in keyed:
        if not key:
            continue
        for start in range(len(tokens) - len(key) + 1):
            if tuple(tokens[start:start + len(key)]) == key:
                return tag
    return None
