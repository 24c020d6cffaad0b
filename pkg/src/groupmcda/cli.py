"""Command-line gateway: batch commands over problem files plus `serve`.

All results print as JSON on standard output.  Exit codes: 0 success,
1 validation or engine error, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import pipeline as pl
from .environment import classify_problem, recommend_methods
from .errors import DecisionError, SchemaError
from .model import validate_problem
from .report import render_report
from .rough import induce_rules, quality_gamma, union_approximations
from .schema import ParsedProblem, load_problem_file
from .store import KnowledgeStore

METHOD_CHOICE = click.Choice(pl.METHOD_IDS)


def emit(doc: dict) -> None:
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


def fail(code: str, message: str = "") -> None:
    emit({"error": code, "message": message})
    sys.exit(1)


def load(path: str) -> ParsedProblem:
    try:
        return load_problem_file(path)
    except SchemaError as exc:
        emit({"error": "PARSE_ERROR", "message": str(exc)})
        sys.exit(1)


@click.group()
def main() -> None:
    """Group multi-criteria decision engine."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--strict", is_flag=True, help="Treat missing grid cells as errors.")
def validate(file: str, strict: bool) -> None:
    """Check a problem file against the model invariants."""
    parsed = load(file)
    report = validate_problem(parsed.problem, strict=strict)
    emit(report.to_json())
    sys.exit(1 if report.errors() else 0)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def classify(file: str) -> None:
    """Classify the problem's uncertainty type and recommend methods."""
    parsed = load(file)
    report = classify_problem(parsed.problem, parsed.sorting, parsed.flags)
    doc = report.to_json()
    doc["recommendedMethods"] = recommend_methods(report)
    emit(doc)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", required=True, type=METHOD_CHOICE)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--samples", default=1000, show_default=True, type=int)
def rank(file: str, method: str, seed: int, samples: int) -> None:
    """Rank the group-aggregated matrix with one method."""
    parsed = load(file)
    try:
        group = pl.aggregate_group_matrix(parsed.problem)
        result = pl.run_method(
            method,
            parsed.problem,
            group.cells,
            group.criterion_weights,
            pl.MethodOptions(seed=seed, samples=samples),
            parsed.sorting,
        )
    except DecisionError as exc:
        fail(exc.code, str(exc))
    doc = result.to_json()
    doc["diagnostics"] = result.diagnostics
    emit(doc)


def _run_pipeline(parsed: ParsedProblem, method, seed, samples, store_dir):
    store = KnowledgeStore(store_dir) if store_dir else None
    options = pl.PipelineOptions(method=method, seed=seed, samples=samples, store=store)
    report = pl.run_pipeline(parsed.problem, parsed.sorting, parsed.flags, options)
    return report, store


@main.command(name="pipeline")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), help="Also write the report to a file.")
@click.option(
    "--store",
    "store_dir",
    type=click.Path(file_okay=False),
    envvar="GROUPMCDA_STORE",
    help="Knowledge store root (env: GROUPMCDA_STORE).",
)
@click.option("--method", type=METHOD_CHOICE, help="Override the recommended method.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--samples", default=1000, show_default=True, type=int)
@click.option("--deterministic", is_flag=True, help="Omit timestamps for golden comparisons.")
def pipeline_cmd(file, out, store_dir, method, seed, samples, deterministic) -> None:
    """Run the six-stage decision process on a problem file."""
    parsed = load(file)
    try:
        report, store = _run_pipeline(parsed, method, seed, samples, store_dir)
    except DecisionError as exc:
        fail(exc.code, str(exc))
    doc = report.to_json()
    if not deterministic:
        doc["generatedAt"] = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    if store is not None and report.result is not None:
        from .store import SessionRecord

        session_id = f"session-{parsed.problem.id}-{len(store.list_sessions())}"
        store.persist_session(
            SessionRecord(
                id=session_id,
                problem_doc={"file": str(Path(file).name), "id": parsed.problem.id},
                report_doc=doc,
                scheme_refs=[r.id for r in store.list_schemes()][-1:],
            )
        )
    if out:
        Path(out).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    emit(doc)
    sys.exit(1 if report.error == "VALIDATION_FAILED" else 0)


@main.command(name="consensus")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", required=True, type=METHOD_CHOICE)
@click.option("--threshold", default=0.5, show_default=True, type=float)
def consensus_cmd(file: str, method: str, threshold: float) -> None:
    """Per-maker agreement with the group ranking."""
    parsed = load(file)
    try:
        report = pl.consensus(
            parsed.problem, method, sorting=parsed.sorting, conflict_threshold=threshold
        )
    except DecisionError as exc:
        fail(exc.code, str(exc))
    emit(report.to_json())


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", required=True, type=METHOD_CHOICE)
@click.option("--criterion", required=True)
@click.option("--delta", required=True, type=float)
def whatif(file: str, method: str, criterion: str, delta: float) -> None:
    """Re-rank after nudging one criterion's group weight."""
    parsed = load(file)
    try:
        result = pl.whatif_weights(parsed.problem, method, criterion, delta, sorting=parsed.sorting)
        result.min_flip_delta = pl.min_weight_flip(
            parsed.problem, method, criterion, sorting=parsed.sorting
        )
    except DecisionError as exc:
        fail(exc.code, str(exc))
    emit(result.to_json())


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-conditions", default=3, show_default=True, type=int)
def drsa(file: str, max_conditions: int) -> None:
    """Rough-set analysis of the problem's sorting table."""
    parsed = load(file)
    if parsed.sorting is None:
        fail("MISSING_SORTING_TABLE", "problem file has no sorting block")
    try:
        approximations = union_approximations(parsed.sorting)
        rules = induce_rules(parsed.sorting, max_conditions=max_conditions)
        gamma = quality_gamma(parsed.sorting)
    except DecisionError as exc:
        fail(exc.code, str(exc))
    emit(
        {
            "gamma": gamma,
            "approximations": [a.to_json() for a in approximations],
            "rules": [r.to_json() for r in rules],
        }
    )


@main.command(name="report")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--method", type=METHOD_CHOICE, help="Override the recommended method.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--samples", default=1000, show_default=True, type=int)
def report_cmd(file, out_dir, method, seed, samples) -> None:
    """Run the pipeline and render figures plus CSV tables to a directory."""
    parsed = load(file)
    try:
        report, _ = _run_pipeline(parsed, method, seed, samples, None)
    except DecisionError as exc:
        fail(exc.code, str(exc))
    if report.error:
        fail(report.error)
    written = render_report(report.to_json(), out_dir)
    emit({"outDir": str(out_dir), "files": written})


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option(
    "--store",
    "store_dir",
    required=True,
    type=click.Path(file_okay=False),
    envvar="GROUPMCDA_STORE",
    help="Knowledge store root (env: GROUPMCDA_STORE).",
)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False), help="Static console bundle.")
def serve(port: int, store_dir: str, host: str, ui_dir: str | None) -> None:
    """Start the HTTP session service over a knowledge store."""
    import uvicorn

    from .api import create_app

    app = create_app(KnowledgeStore(store_dir), ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
