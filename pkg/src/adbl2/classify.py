"""Two-label constrained classification: prompt -> scores -> probabilities.

The backend is asked for the log-likelihood of each label word as a
continuation of the prompt; a two-way softmax turns the pair into
probabilities that sum to one. Exact ties predict attack and are flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .backends import BackendRegistry, ScoringBackend
from .errors import BackendProtocolError
from .model import RelationType
from .prompts import (
    DEFAULT_TEMPLATE,
    PromptTechnique,
    PromptTemplate,
    ZeroShot,
    build_prompt,
    default_few_shot,
    prompt_fingerprint,
)


@dataclass(frozen=True)
class LabelScores:
    """Raw log-scale scores for the two label continuations."""

    raw_attack: float
    raw_support: float

    def __post_init__(self):
        if not (math.isfinite(self.raw_attack) and math.isfinite(self.raw_support)):
            raise BackendProtocolError("label scores must be finite")


@dataclass(frozen=True)
class RelationClassification:
    """Normalized outcome of one classification call."""

    p_attack: float
    p_support: float
    predicted: RelationType
    backend_id: str
    prompt_fingerprint: str
    is_tie: bool = False

    def probability_of(self, label: RelationType) -> float:
        return self.p_attack if label is RelationType.ATTACK else self.p_support


@dataclass
class BackendConfig:
    """A backend plus the template and technique to drive it with."""

    backend: ScoringBackend
    template: PromptTemplate = DEFAULT_TEMPLATE
    technique: PromptTechnique = field(default_factory=ZeroShot)

    @property
    def backend_id(self) -> str:
        return self.backend.backend_id


def continuations_for(template: PromptTemplate) -> tuple[str, str]:
    """The two scored continuations: a space plus each label word."""
    attack_word, support_word = template.label_words
    return f" {attack_word}", f" {support_word}"


def technique_from_name(name: Optional[str]) -> PromptTechnique:
    """Map the CLI/API technique names onto technique values."""
    if name in (None, "zero", "zero-shot"):
        return ZeroShot()
    if name in ("few", "few-shot"):
        return default_few_shot()
    raise ValueError(f"unknown technique {name!r}; use 'zero' or 'few'")


def make_config(
    registry: BackendRegistry,
    backend_name: Optional[str] = None,
    technique_name: Optional[str] = None,
) -> BackendConfig:
    """Assemble a per-request config from a backend registry."""
    return BackendConfig(
        backend=registry.get(backend_name),
        template=registry.template_for(backend_name),
        technique=technique_from_name(technique_name),
    )


def score_labels(
    backend: ScoringBackend,
    prompt: str,
    label_words: Optional[tuple[str, str]] = None,
) -> LabelScores:
    """Ask the backend for one log score per label word."""
    attack_word, support_word = label_words or DEFAULT_TEMPLATE.label_words
    raw_attack, raw_support = backend.score(prompt, (f" {attack_word}", f" {support_word}"))
    return LabelScores(raw_attack=float(raw_attack), raw_support=float(raw_support))


def normalize(scores: LabelScores) -> tuple[float, float]:
    """Two-way softmax, computed stably by subtracting the larger score."""
    top = max(scores.raw_attack, scores.raw_support)
    exp_attack = math.exp(scores.raw_attack - top)
    exp_support = math.exp(scores.raw_support - top)
    denominator = exp_attack + exp_support
    return exp_attack / denominator, exp_support / denominator


def classify(config: BackendConfig, parent_text: str, child_text: str) -> RelationClassification:
    """Build the prompt, score both labels, and normalize into a prediction."""
    prompt = build_prompt(config.template, config.technique, parent_text, child_text)
    scores = score_labels(config.backend, prompt, config.template.label_words)
    p_attack, p_support = normalize(scores)
    # Exact tie predicts attack; the flag lets callers treat ties specially.
    predicted = RelationType.ATTACK if p_attack >= p_support else RelationType.SUPPORT
    return RelationClassification(
        p_attack=p_attack,
        p_support=p_support,
        predicted=predicted,
        backend_id=config.backend_id,
        prompt_fingerprint=prompt_fingerprint(prompt),
        is_tie=(p_attack == p_support),
    )
