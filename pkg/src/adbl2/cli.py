"""Command-line interface: batch access to every pipeline stage.

Exit codes: 0 success, 1 domain-level findings (relation mismatches),
2 usage error, 3 I/O or backend failure. Randomized stages (balance,
split) require an explicit --seed.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from .backends import BackendRegistry, SelfConsistencyBackend
from .classify import BackendConfig, classify, make_config, technique_from_name
from .dataset import (
    DEFAULT_MAX_CHILD_DEPTH,
    DEFAULT_TRAIN_FRACTION,
    SplitSpec,
    TripleDataset,
    extract_triples,
    read_triples,
    split,
    undersample,
    write_corpus,
    write_triples,
)
from .errors import Adbl2Error, BackendError
from .evalreport import evaluate, render_report
from .kialo import detect_domain, parse_kialo, read_title, serialize_kialo
from .prompts import DEFAULT_TEMPLATE, load_template
from .service import ApiError, DebateStore, create_app
from .verification import EdgeVerificationFailure, verify_tree

EXIT_FINDINGS = 1
EXIT_FAILURE = 3


def _registry(backends_file: Optional[str]) -> BackendRegistry:
    if backends_file:
        return BackendRegistry.from_file(backends_file)
    return BackendRegistry.builtin()


def _config(
    registry: BackendRegistry,
    backend: Optional[str],
    technique: Optional[str],
    dataset: Optional[TripleDataset] = None,
) -> BackendConfig:
    # "self" is the dataset-derived oracle backend, available anywhere a
    # dataset is in scope; it is not part of the registry.
    if backend == "self":
        if dataset is None:
            raise click.UsageError("--backend self needs a dataset to read labels from")
        return BackendConfig(
            backend=SelfConsistencyBackend.from_triples(dataset.triples),
            technique=technique_from_name(technique),
        )
    try:
        return make_config(registry, backend, technique)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


def _fail(message: str) -> SystemExit:
    click.echo(f"error: {message}", err=True)
    return SystemExit(EXIT_FAILURE)


@click.group()
@click.option("--data-dir", default="adbl2_data", envvar="ADBL2_DATA",
              show_default=True, help="Directory for stored debates.")
@click.option("--backends", "backends_file", default=None, envvar="ADBL2_BACKENDS",
              help="Backend registry JSON (default: builtin stub).")
@click.pass_context
def main(ctx: click.Context, data_dir: str, backends_file: Optional[str]):
    """Assisted debate builder: import, verify, assist, dataset, eval."""
    ctx.obj = {"data_dir": data_dir, "backends_file": backends_file}


@main.command("import")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--domain", default=None, help="Domain tag override.")
@click.pass_obj
def import_cmd(obj: dict, file: Path, domain: Optional[str]):
    """Parse and validate FILE, print diagnostics, store the debate."""
    text = file.read_text(encoding="utf-8")
    tree, diagnostics = parse_kialo(text)
    for diagnostic in diagnostics:
        click.echo(diagnostic.render(), err=True)
    if tree is None:
        raise _fail(f"{file} did not parse")
    tree.domain = detect_domain(str(file), override=domain)
    store = DebateStore(obj["data_dir"])
    debate = store.create(tree, title=read_title(text))
    click.echo(debate.debate_id)


@main.command("export")
@click.argument("debate_id")
@click.option("-o", "output", type=click.Path(dir_okay=False, path_type=Path),
              default=None, help="Write to a file instead of stdout.")
@click.pass_obj
def export_cmd(obj: dict, debate_id: str, output: Optional[Path]):
    """Serialize a stored debate back to outline text."""
    store = DebateStore(obj["data_dir"])
    try:
        debate = store.get(debate_id)
    except ApiError:
        raise _fail(f"no debate {debate_id!r} in {obj['data_dir']}") from None
    text = serialize_kialo(debate.tree, title=debate.title)
    if output is None:
        click.echo(text)
    else:
        output.write_text(text + "\n", encoding="utf-8")


@main.command("classify")
@click.option("--parent", required=True, help="Parent argument text.")
@click.option("--child", required=True, help="Child argument text.")
@click.option("--backend", default=None, help="Backend name from the registry.")
@click.option("--technique", default=None, type=click.Choice(["zero", "few"]),
              help="Prompting technique (default zero).")
@click.pass_obj
def classify_cmd(obj: dict, parent: str, child: str, backend: Optional[str],
                 technique: Optional[str]):
    """Classify one (parent, child) pair and print the probabilities."""
    config = _config(_registry(obj["backends_file"]), backend, technique)
    try:
        outcome = classify(config, parent, child)
    except BackendError as exc:
        raise _fail(str(exc)) from None
    click.echo(f"p_attack {outcome.p_attack:.6f}")
    click.echo(f"p_support {outcome.p_support:.6f}")
    click.echo(f"predicted {outcome.predicted.value}" + (" (tie)" if outcome.is_tie else ""))


@main.command("verify")
@click.argument("debate_id")
@click.option("--backend", default=None)
@click.option("--technique", default=None, type=click.Choice(["zero", "few"]))
@click.option("--floor", default=0.6, show_default=True,
              help="Confidence floor for confirming a stored relation.")
@click.pass_obj
def verify_cmd(obj: dict, debate_id: str, backend: Optional[str],
               technique: Optional[str], floor: float):
    """Re-verify every stored relation; exit 1 if any mismatch."""
    store = DebateStore(obj["data_dir"])
    try:
        debate = store.get(debate_id)
    except ApiError:
        raise _fail(f"no debate {debate_id!r} in {obj['data_dir']}") from None
    config = _config(_registry(obj["backends_file"]), backend, technique)
    summary = verify_tree(debate.tree, config, floor)
    failures = 0
    for entry in summary.results:
        if isinstance(entry, EdgeVerificationFailure):
            failures += 1
            click.echo(f"{entry.edge.child} -> {entry.edge.parent}  ERROR  {entry.error}")
        else:
            click.echo(
                f"{entry.edge.child} -> {entry.edge.parent}  "
                f"stored={entry.stored.value} predicted={entry.predicted.value} "
                f"p={entry.probability_of_stored:.3f}  {entry.status.value}"
            )
    click.echo(
        f"total {summary.total}  confirmed {summary.confirmed}  "
        f"mismatched {summary.mismatched}  low_confidence {summary.low_confidence}"
    )
    if failures:
        sys.exit(EXIT_FAILURE)
    if summary.mismatched:
        sys.exit(EXIT_FINDINGS)


@main.group("dataset")
def dataset_group():
    """Triple extraction, balancing, splitting, corpus emission."""


@dataset_group.command("extract")
@click.argument("files", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--max-depth", default=DEFAULT_MAX_CHILD_DEPTH, show_default=True,
              help="Keep triples whose child depth is at most this.")
@click.option("--domain", default=None, help="Domain override for all files.")
@click.option("-o", "output", required=True,
              type=click.Path(dir_okay=False, path_type=Path))
def dataset_extract(files: tuple[Path, ...], max_depth: int, domain: Optional[str],
                    output: Path):
    """Extract (child, parent, label) triples from Kialo FILES."""
    dataset = TripleDataset()
    for file in files:
        tree, diagnostics = parse_kialo(file.read_text(encoding="utf-8"))
        for diagnostic in diagnostics:
            click.echo(f"{file}: {diagnostic.render()}", err=True)
        if tree is None:
            raise _fail(f"{file} did not parse")
        file_domain = detect_domain(str(file), override=domain) or "unknown"
        triples = extract_triples(tree, file_domain, max_child_depth=max_depth,
                                  debate_id=file.stem)
        dataset.triples.extend(triples)
        dataset.provenance.append({
            "step": "extract", "source": str(file), "domain": file_domain,
            "max_child_depth": max_depth, "count": len(triples),
        })
    write_triples(output, dataset)
    click.echo(f"{len(dataset.triples)} triples -> {output}")


@dataset_group.command("balance")
@click.argument("input", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--seed", required=True, type=int, help="PRNG seed (mandatory).")
@click.option("-o", "output", required=True,
              type=click.Path(dir_okay=False, path_type=Path))
def dataset_balance(input: Path, seed: int, output: Path):
    """Undersample to per-domain label balance."""
    dataset = read_triples(input)
    balanced = undersample(dataset, seed)
    write_triples(output, balanced)
    click.echo(f"{len(dataset)} -> {len(balanced)} triples -> {output}")


@dataset_group.command("split")
@click.argument("input", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--train-frac", default=DEFAULT_TRAIN_FRACTION, show_default=True)
@click.option("--seed", required=True, type=int, help="PRNG seed (mandatory).")
@click.option("--by-domain", is_flag=True, help="Also stratify by domain.")
@click.option("--train-out", "-o-train", "train_out", required=True,
              type=click.Path(dir_okay=False, path_type=Path))
@click.option("--test-out", "-o-test", "test_out", required=True,
              type=click.Path(dir_okay=False, path_type=Path))
def dataset_split(input: Path, train_frac: float, seed: int, by_domain: bool,
                  train_out: Path, test_out: Path):
    """Stratified train/test split preserving class balance."""
    dataset = read_triples(input)
    spec = SplitSpec(seed=seed, train_fraction=train_frac, stratify_by_domain=by_domain)
    try:
        train, test = split(dataset, spec)
    except Adbl2Error as exc:
        raise _fail(str(exc)) from None
    write_triples(train_out, train)
    write_triples(test_out, test)
    click.echo(f"train {len(train)} -> {train_out}")
    click.echo(f"test {len(test)} -> {test_out}")


@dataset_group.command("emit-corpus")
@click.argument("input", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--template", "template_source", default="default", show_default=True,
              help="'default' or a template JSON file path.")
@click.option("-o", "output", required=True,
              type=click.Path(dir_okay=False, path_type=Path))
def dataset_emit_corpus(input: Path, template_source: str, output: Path):
    """Emit a fine-tune-ready prompt/completion corpus (JSONL)."""
    dataset = read_triples(input)
    if template_source == "default":
        template = DEFAULT_TEMPLATE
    else:
        template = load_template(Path(template_source).read_text(encoding="utf-8"))
    with output.open("w", encoding="utf-8") as handle:
        count = write_corpus(handle, dataset, template)
    click.echo(f"{count} records -> {output}")


@main.command("eval")
@click.argument("dataset_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--backend", default=None,
              help="Registry backend name, or 'self' for the dataset oracle.")
@click.option("--technique", default=None, type=click.Choice(["zero", "few"]))
@click.option("--format", "format_", default="table", show_default=True,
              type=click.Choice(["table", "csv", "json"]))
@click.option("--weighted", is_flag=True, help="Also report the instance-weighted mean.")
@click.pass_obj
def eval_cmd(obj: dict, dataset_file: Path, backend: Optional[str],
             technique: Optional[str], format_: str, weighted: bool):
    """Evaluate a backend on a triples dataset: per-domain F1 report."""
    dataset = read_triples(dataset_file)
    config = _config(_registry(obj["backends_file"]), backend, technique, dataset=dataset)
    report = evaluate(config, dataset, dataset_manifest=str(dataset_file))
    click.echo(render_report(report, format=format_, weighted=weighted))
    if any(row.incomplete for row in report.rows):
        sys.exit(EXIT_FAILURE)


@main.command("serve")
@click.option("--listen", default="127.0.0.1:8000", show_default=True,
              help="host:port to bind.")
@click.option("--data", "data_dir", default=None,
              help="Debate storage directory (default: global --data-dir).")
@click.option("--backends", "backends_file", default=None,
              help="Backend registry JSON for this server.")
@click.option("--ui", "ui_dir", default=None,
              type=click.Path(exists=True, file_okay=False),
              help="Serve a built web UI from this directory at /ui.")
@click.pass_obj
def serve_cmd(obj: dict, listen: str, data_dir: Optional[str],
              backends_file: Optional[str], ui_dir: Optional[str]):
    """Run the HTTP service."""
    import uvicorn

    host, _, port = listen.rpartition(":")
    store = DebateStore(data_dir or obj["data_dir"])
    registry = _registry(backends_file or obj["backends_file"])
    app = create_app(store, registry, ui_dir=ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    main()
