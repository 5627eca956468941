"""Dataset construction: triple extraction, balancing, splitting, corpus emission.

A triple is one (child text, parent text, label) instance tagged with its
domain and the child's depth. Extraction keeps only triples whose child sits
at depth <= 7 by default (deeper branches are less curated). Balancing
undersamples the majority label within each domain; splitting is stratified
and seeded. Every randomized step records its seed in the provenance.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, TextIO, Union

from .errors import EmptyStratumError
from .model import DebateTree, RelationType
from .prompts import PromptTemplate, ZeroShot, build_prompt

DEFAULT_MAX_CHILD_DEPTH = 7
DEFAULT_TRAIN_FRACTION = 0.778


@dataclass(frozen=True)
class Triple:
    """One classification instance: child x, parent y, relation z."""

    child_text: str
    parent_text: str
    label: RelationType
    domain: str
    child_depth: int
    debate_id: str = ""

    def to_json(self) -> dict:
        return {
            "child_text": self.child_text,
            "parent_text": self.parent_text,
            "label": self.label.value,
            "domain": self.domain,
            "child_depth": self.child_depth,
            "debate_id": self.debate_id,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Triple":
        return cls(
            child_text=obj["child_text"],
            parent_text=obj["parent_text"],
            label=RelationType.from_string(obj["label"]),
            domain=obj["domain"],
            child_depth=int(obj["child_depth"]),
            debate_id=obj.get("debate_id", ""),
        )


@dataclass
class TripleDataset:
    """Ordered triples plus a provenance trail of how they were produced."""

    triples: list[Triple] = field(default_factory=list)
    provenance: list[dict] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def with_step(self, step: str, **params) -> "TripleDataset":
        """Copy of this dataset recording one more pipeline step."""
        entry = {"step": step, **params}
        return TripleDataset(list(self.triples), self.provenance + [entry])


@dataclass(frozen=True)
class SplitSpec:
    """Train/test split parameters; label stratification is always available."""

    seed: int
    train_fraction: float = DEFAULT_TRAIN_FRACTION
    stratify_by_label: bool = True
    stratify_by_domain: bool = False

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def extract_triples(
    tree: DebateTree,
    domain: str,
    max_child_depth: int = DEFAULT_MAX_CHILD_DEPTH,
    debate_id: str = "",
) -> list[Triple]:
    """One triple per edge whose child depth is within the cutoff, preorder."""
    triples = []
    for edge in tree.edges:
        child_depth = tree.depth(edge.child)
        if child_depth > max_child_depth:
            continue
        triples.append(Triple(
            child_text=tree.argument(edge.child).text,
            parent_text=tree.argument(edge.parent).text,
            label=edge.relation,
            domain=domain,
            child_depth=child_depth,
            debate_id=debate_id,
        ))
    return triples


def undersample(dataset: TripleDataset, seed: int) -> TripleDataset:
    """Balance labels within each domain down to the minority-label count.

    Survivors keep their relative order; the same seed always keeps the
    same members.
    """
    rng = random.Random(seed)
    keep: set[int] = set()
    by_domain: dict[str, dict[RelationType, list[int]]] = {}
    for index, triple in enumerate(dataset.triples):
        by_domain.setdefault(triple.domain, {label: [] for label in RelationType})
        by_domain[triple.domain][triple.label].append(index)
    for domain in sorted(by_domain):
        groups = by_domain[domain]
        floor_count = min(len(indices) for indices in groups.values())
        for label in sorted(groups):
            indices = groups[label]
            if len(indices) > floor_count:
                keep.update(rng.sample(indices, floor_count))
            else:
                keep.update(indices)
    survivors = [triple for index, triple in enumerate(dataset.triples) if index in keep]
    result = TripleDataset(survivors, list(dataset.provenance))
    return result.with_step("undersample", seed=seed)


def _stratum_key(triple: Triple, spec: SplitSpec) -> tuple:
    key: tuple = ()
    if spec.stratify_by_label:
        key += (triple.label.value,)
    if spec.stratify_by_domain:
        key += (triple.domain,)
    return key


def split(dataset: TripleDataset, spec: SplitSpec) -> tuple[TripleDataset, TripleDataset]:
    """Seeded stratified split: train gets floor(n * fraction) per stratum."""
    strata: dict[tuple, list[int]] = {}
    for index, triple in enumerate(dataset.triples):
        strata.setdefault(_stratum_key(triple, spec), []).append(index)
    if not strata:
        raise EmptyStratumError("cannot split an empty dataset")
    for key, indices in strata.items():
        if not indices:
            raise EmptyStratumError(f"stratum {key} is empty")
    rng = random.Random(spec.seed)
    train_indices: set[int] = set()
    for key in sorted(strata):
        indices = list(strata[key])
        rng.shuffle(indices)
        take = math.floor(len(indices) * spec.train_fraction)
        train_indices.update(indices[:take])
    train = [t for i, t in enumerate(dataset.triples) if i in train_indices]
    test = [t for i, t in enumerate(dataset.triples) if i not in train_indices]
    params = {
        "seed": spec.seed,
        "train_fraction": spec.train_fraction,
        "stratify_by_label": spec.stratify_by_label,
        "stratify_by_domain": spec.stratify_by_domain,
    }
    return (
        TripleDataset(train, list(dataset.provenance)).with_step("split:train", **params),
        TripleDataset(test, list(dataset.provenance)).with_step("split:test", **params),
    )


def emit_finetune_corpus(dataset: TripleDataset, template: PromptTemplate) -> Iterator[dict]:
    """One record per triple: the zero-shot prompt and the gold label word."""
    technique = ZeroShot()
    for triple in dataset.triples:
        yield {
            "prompt": build_prompt(template, technique, triple.parent_text, triple.child_text),
            "completion": template.word_for(triple.label),
        }


@dataclass
class LabelCounts:
    attack: int = 0
    support: int = 0

    @property
    def total(self) -> int:
        return self.attack + self.support


def dataset_stats(dataset: TripleDataset) -> dict[str, LabelCounts]:
    """Per-domain label counts, domains in first-occurrence order."""
    stats: dict[str, LabelCounts] = {}
    for triple in dataset.triples:
        counts = stats.setdefault(triple.domain, LabelCounts())
        if triple.label is RelationType.ATTACK:
            counts.attack += 1
        else:
            counts.support += 1
    return stats


# -- file formats ---------------------------------------------------------


def _manifest_path(path: Path) -> Path:
    return path.with_name(path.stem + ".manifest.json")


def write_triples(path: Union[str, Path], dataset: TripleDataset) -> None:
    """JSON-lines for the triples, plus a sidecar manifest with provenance."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for triple in dataset.triples:
            handle.write(json.dumps(triple.to_json(), ensure_ascii=False) + "\n")
    manifest = {"count": len(dataset.triples), "provenance": dataset.provenance}
    with _manifest_path(path).open("w", encoding="utf-8") as handle:
        json.dump(manifest, handle, ensure_ascii=False, indent=2)
        handle.write("\n")


def read_triples(path: Union[str, Path]) -> TripleDataset:
    """Load a JSONL triples file; the manifest sidecar is optional."""
    path = Path(path)
    triples = []
    with path.open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                triples.append(Triple.from_json(json.loads(line)))
    provenance: list[dict] = []
    manifest = _manifest_path(path)
    if manifest.exists():
        with manifest.open("r", encoding="utf-8") as handle:
            provenance = json.load(handle).get("provenance", [])
    return TripleDataset(triples, provenance)


def write_corpus(handle: TextIO, dataset: TripleDataset, template: PromptTemplate) -> int:
    """Stream the fine-tune corpus as JSONL; returns the record count."""
    count = 0
    for record in emit_finetune_corpus(dataset, template):
        handle.write(json.dumps(record, ensure_ascii=False) + "\n")
        count += 1
    return count
