"""Per-domain attack/support/macro F1 evaluation over a triple dataset.

Every triple is classified through the configured backend; counts and F1
values are grouped by domain and averaged (unweighted) into one overall
number. Zero-denominator F1 is reported as 0.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional, Sequence

from .classify import BackendConfig, classify
from .dataset import TripleDataset
from .errors import BackendError, LengthMismatchError
from .model import RelationType


@dataclass
class ConfusionCounts:
    """Binary confusion tallies per label; duality ties the fp/fn pairs."""

    tp_attack: int = 0
    fp_attack: int = 0
    fn_attack: int = 0
    tp_support: int = 0
    fp_support: int = 0
    fn_support: int = 0


def accumulate(golds: Sequence[RelationType], preds: Sequence[RelationType]) -> ConfusionCounts:
    """Standard per-label confusion counting over aligned sequences."""
    if len(golds) != len(preds):
        raise LengthMismatchError(f"{len(golds)} golds vs {len(preds)} predictions")
    if not golds:
        raise LengthMismatchError("cannot accumulate over empty sequences")
    counts = ConfusionCounts()
    for gold, pred in zip(golds, preds):
        if gold is RelationType.ATTACK:
            if pred is RelationType.ATTACK:
                counts.tp_attack += 1
            else:
                counts.fn_attack += 1
                counts.fp_support += 1
        else:
            if pred is RelationType.SUPPORT:
                counts.tp_support += 1
            else:
                counts.fn_support += 1
                counts.fp_attack += 1
    return counts


def f1(tp: int, fp: int, fn: int) -> float:
    """2*tp / (2*tp + fp + fn); 0 by convention when the denominator is 0."""
    denominator = 2 * tp + fp + fn
    if denominator == 0:
        return 0.0
    return 2 * tp / denominator


def macro_f1(f1_attack: float, f1_support: float) -> float:
    """Unweighted mean of the two per-label F1 values."""
    return (f1_attack + f1_support) / 2.0


@dataclass
class DomainRow:
    """One report row: gold counts and the three F1 values for a domain."""

    domain: str
    n_attack: int
    n_support: int
    f1_attack: float
    f1_support: float
    f1_macro: float
    n_failed: int = 0

    @property
    def incomplete(self) -> bool:
        return self.n_failed > 0


@dataclass
class EvalReport:
    """Full evaluation outcome, one row per domain plus the overall average."""

    rows: list[DomainRow] = field(default_factory=list)
    overall_average_macro: float = 0.0
    backend_id: str = ""
    dataset_manifest: Optional[str] = None

    def weighted_average_macro(self) -> float:
        """Instance-weighted alternative to the unweighted overall average."""
        total = sum(row.n_attack + row.n_support for row in self.rows)
        if total == 0:
            return 0.0
        return sum(row.f1_macro * (row.n_attack + row.n_support) for row in self.rows) / total


def evaluate(
    config: BackendConfig,
    dataset: TripleDataset,
    dataset_manifest: Optional[str] = None,
) -> EvalReport:
    """Classify every triple and compute per-domain and overall metrics.

    Backend failures are counted per domain and flag the row incomplete;
    metrics for that row cover the triples that did classify.
    """
    golds: dict[str, list[RelationType]] = {}
    preds: dict[str, list[RelationType]] = {}
    failed: dict[str, int] = {}
    for triple in dataset.triples:
        domain = triple.domain
        golds.setdefault(domain, [])
        preds.setdefault(domain, [])
        failed.setdefault(domain, 0)
        try:
            outcome = classify(config, triple.parent_text, triple.child_text)
        except BackendError:
            failed[domain] += 1
            continue
        golds[domain].append(triple.label)
        preds[domain].append(outcome.predicted)

    report = EvalReport(backend_id=config.backend_id, dataset_manifest=dataset_manifest)
    for domain in golds:
        domain_golds, domain_preds = golds[domain], preds[domain]
        if domain_golds:
            counts = accumulate(domain_golds, domain_preds)
            row_f1_attack = f1(counts.tp_attack, counts.fp_attack, counts.fn_attack)
            row_f1_support = f1(counts.tp_support, counts.fp_support, counts.fn_support)
        else:
            row_f1_attack = row_f1_support = 0.0
        report.rows.append(DomainRow(
            domain=domain,
            n_attack=sum(1 for g in domain_golds if g is RelationType.ATTACK),
            n_support=sum(1 for g in domain_golds if g is RelationType.SUPPORT),
            f1_attack=row_f1_attack,
            f1_support=row_f1_support,
            f1_macro=macro_f1(row_f1_attack, row_f1_support),
            n_failed=failed[domain],
        ))
    if report.rows:
        report.overall_average_macro = sum(row.f1_macro for row in report.rows) / len(report.rows)
    return report


def percent(value: float, places: str = "0.1") -> str:
    """Format a [0,1] value as percent, rounded half-to-even."""
    return str(Decimal(value * 100).quantize(Decimal(places), rounding=ROUND_HALF_EVEN))


def render_report(report: EvalReport, format: str = "table", weighted: bool = False) -> str:
    """Render as an aligned text table, CSV, or JSON."""
    if format == "json":
        return _render_json(report, weighted)
    if format == "csv":
        return _render_csv(report)
    if format == "table":
        return _render_table(report, weighted)
    raise ValueError(f"unknown report format {format!r}")


def _render_json(report: EvalReport, weighted: bool) -> str:
    payload = {
        "backend_id": report.backend_id,
        "dataset_manifest": report.dataset_manifest,
        "rows": [
            {
                "domain": row.domain,
                "n_attack": row.n_attack,
                "n_support": row.n_support,
                "f1_attack": row.f1_attack,
                "f1_support": row.f1_support,
                "f1_macro": row.f1_macro,
                "n_failed": row.n_failed,
                "incomplete": row.incomplete,
            }
            for row in report.rows
        ],
        "overall_average_macro": report.overall_average_macro,
    }
    if weighted:
        payload["weighted_average_macro"] = report.weighted_average_macro()
    return json.dumps(payload, indent=2)


def _render_csv(report: EvalReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["domain", "n_attack", "n_support", "f1_attack", "f1_support", "f1_macro"])
    for row in report.rows:
        writer.writerow([
            row.domain, row.n_attack, row.n_support,
            repr(row.f1_attack), repr(row.f1_support), repr(row.f1_macro),
        ])
    return buffer.getvalue()


def _render_table(report: EvalReport, weighted: bool) -> str:
    header = ("Domain", "Attack", "Support", "Attack/Support/Macro F1")
    body = []
    for row in report.rows:
        scores = f"{percent(row.f1_attack)} / {percent(row.f1_support)} / {percent(row.f1_macro)}"
        if row.incomplete:
            scores += f" (incomplete: {row.n_failed} failed)"
        body.append((row.domain, str(row.n_attack), str(row.n_support), scores))
    widths = [max(len(cells[i]) for cells in [header, *body]) for i in range(4)]
    lines = []
    for cells in [header, *body]:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip())
    lines.append(f"Average macro F1: {percent(report.overall_average_macro, '0.01')}%")
    if weighted:
        lines.append(f"Weighted macro F1: {percent(report.weighted_average_macro(), '0.01')}%")
    return "\n".join(lines)
