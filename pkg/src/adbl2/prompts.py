"""Prompt construction for two-label relation classification.

A template renders one (parent, child) pair into an instance block and ends
with a cue announcing the single-token answer. Few-shot priming prepends
fixed labeled pairs; the query instance always comes last, cue unanswered,
so the backend scores the two label words as continuations.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from importlib import resources
from typing import Union

from .errors import TemplateError
from .model import RelationType

_PLACEHOLDER_RE = re.compile(r"\{parent\}|\{child\}")


@dataclass(frozen=True)
class FewShotExample:
    """One fixed labeled pair used for priming."""

    parent_text: str
    child_text: str
    label: RelationType

    def __post_init__(self):
        if not self.parent_text.strip() or not self.child_text.strip():
            raise ValueError("few-shot example texts must be non-empty")


@dataclass(frozen=True)
class ZeroShot:
    """No priming: the prompt holds only the query instance."""


@dataclass(frozen=True)
class FewShot:
    """Priming with a non-empty list of fixed examples before the query."""

    examples: tuple[FewShotExample, ...]

    def __post_init__(self):
        if not self.examples:
            raise ValueError("few-shot technique needs at least one example")


PromptTechnique = Union[ZeroShot, FewShot]


@dataclass(frozen=True)
class PromptTemplate:
    """How one backend wants its prompts worded.

    ``instance_format`` must contain ``{parent}`` and ``{child}`` exactly
    once each; ``label_words`` are the two scored continuations.
    """

    name: str
    system_preamble: str
    instance_format: str
    label_cue: str
    label_words: tuple[str, str] = ("attack", "support")

    def __post_init__(self):
        for placeholder in ("{parent}", "{child}"):
            count = self.instance_format.count(placeholder)
            if count != 1:
                raise TemplateError(
                    f"instance_format must contain {placeholder} exactly once, found {count}"
                )
        attack_word, support_word = self.label_words
        if not attack_word or not support_word or attack_word == support_word:
            raise TemplateError("label words must be distinct and non-empty")

    def word_for(self, label: RelationType) -> str:
        return self.label_words[0] if label is RelationType.ATTACK else self.label_words[1]

    def render_instance(self, parent_text: str, child_text: str) -> str:
        # Single-pass substitution; argument texts may themselves contain braces.
        return _PLACEHOLDER_RE.sub(
            lambda match: parent_text if match.group() == "{parent}" else child_text,
            self.instance_format,
        )


DEFAULT_TEMPLATE = PromptTemplate(
    name="default",
    system_preamble=(
        "You judge relations between debate arguments. Given a parent argument "
        "and a child argument that replies to it, decide whether the child "
        "attacks or supports the parent. Answer with a single word."
    ),
    instance_format="Parent argument: {parent}\nChild argument: {child}",
    label_cue="The relation of the child to the parent is:",
)


def build_prompt(
    template: PromptTemplate,
    technique: PromptTechnique,
    parent_text: str,
    child_text: str,
) -> str:
    """Assemble the full prompt; byte-identical for identical inputs."""
    if not parent_text.strip() or not child_text.strip():
        raise ValueError("parent and child texts must be non-empty")
    blocks = [template.system_preamble]
    if isinstance(technique, FewShot):
        for example in technique.examples:
            rendered = template.render_instance(example.parent_text, example.child_text)
            blocks.append(f"{rendered}\n{template.label_cue} {template.word_for(example.label)}")
    blocks.append(
        f"{template.render_instance(parent_text, child_text)}\n{template.label_cue}"
    )
    return "\n\n".join(blocks)


def prompt_fingerprint(prompt: str) -> str:
    """Short stable hash identifying a prompt byte string."""
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]


def _load_packaged_json(filename: str):
    path = resources.files("adbl2").joinpath("data").joinpath(filename)
    with path.open("r", encoding="utf-8") as handle:
        return json.load(handle)


def default_few_shot_examples() -> tuple[FewShotExample, ...]:
    """The packaged four-pair priming set (attack/support alternating)."""
    raw = _load_packaged_json("default_few_shot.json")
    return tuple(
        FewShotExample(
            parent_text=entry["parent_text"],
            child_text=entry["child_text"],
            label=RelationType.from_string(entry["label"]),
        )
        for entry in raw
    )


def default_few_shot() -> FewShot:
    return FewShot(default_few_shot_examples())


def load_template(source: Union[str, dict]) -> PromptTemplate:
    """Build a template from a parsed JSON object or raise TemplateError."""
    if isinstance(source, str):
        source = json.loads(source)
    try:
        return PromptTemplate(
            name=source["name"],
            system_preamble=source["system_preamble"],
            instance_format=source["instance_format"],
            label_cue=source["label_cue"],
            label_words=tuple(source.get("label_words", ("attack", "support"))),
        )
    except KeyError as missing:
        raise TemplateError(f"template is missing field {missing}") from None
