"""Command line front end.

Subcommands: validate, query, layout, export, serve. Data goes to
stdout, diagnostics to stderr. Exit codes: 0 success, 1 the input
failed validation, 2 usage or I/O trouble. JSON printed here comes
from the same serialization path the HTTP service uses, so the two
always agree byte for byte.
"""

from __future__ import annotations

import sys
from dataclasses import replace
from pathlib import Path

import click

from . import wire
from .config import settings_from_env
from .graphcore import (
    MethodGraph,
    UnknownAcronymError,
    UnknownAreaError,
    ancestors,
    area_subgraph,
    build_graph,
    descendants,
    recommend,
    search,
    upgrade_candidates,
)
from .ingest import StrictParseError, TableFormatError, export_records_json, export_table
from .layout import LayoutParams, run
from .render import render_layout
from .schema import ValidationReport
from .store import DatastoreError, read_dataset

_QUERY_KINDS = ("ancestors", "descendants", "upgrades", "area", "search", "recommend")


def _fail(message: str, code: int) -> "sys.NoReturn":
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_graph(data_file: str) -> tuple[MethodGraph, ValidationReport]:
    """Lenient load for read-only commands; structural trouble exits 2."""
    try:
        document = read_dataset(data_file)
    except (DatastoreError, TableFormatError) as exc:
        _fail(str(exc), 2)
    graph, report = build_graph(list(document.records))
    return graph, ValidationReport(tuple(document.issues) + report.issues)


@click.group()
def main() -> None:
    """Explore which machine-learning methods build on which."""


@main.command()
@click.argument("data_file")
@click.option("--strict", is_flag=True, help="Abort on the first error-severity issue.")
def validate(data_file: str, strict: bool) -> None:
    """Check a dataset and report every issue found."""
    path = Path(data_file)
    try:
        content = path.read_text(encoding="utf-8")
    except OSError as exc:
        _fail(str(exc), 2)
    from .ingest import parse_records_json, parse_table

    parser = parse_records_json if path.suffix.lower() == ".json" else parse_table
    try:
        document = parser(content, lenient=not strict, source_name=str(path))
    except TableFormatError as exc:
        _fail(str(exc), 2)
    except StrictParseError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    _graph, graph_report = build_graph(list(document.records))
    report = ValidationReport(tuple(document.issues) + graph_report.issues)
    for issue in report.issues:
        click.echo(str(issue))
    click.echo(report.summary())
    sys.exit(1 if report.has_errors else 0)


@main.command()
@click.argument("data_file")
@click.argument("kind", type=click.Choice(_QUERY_KINDS))
@click.argument("args", nargs=-1)
@click.option("--limit", default=10, show_default=True, help="Search result cap.")
@click.option("--k", default=5, show_default=True, help="Recommendation count.")
@click.option("--include-conceptual", is_flag=True, help="Traverse inspired-by edges too.")
def query(
    data_file: str, kind: str, args: tuple[str, ...], limit: int, k: int,
    include_conceptual: bool,
) -> None:
    """Ask the graph a question; the answer is JSON on stdout.

    \b
    ancestors ACRONYM     every method this one transitively builds on
    descendants ACRONYM   every method that builds on this one
    upgrades ACRONYM      direct users, newest first (drop-in successors)
    area AREA             one subject area's subgraph
    search TEXT...        find methods by acronym or name
    recommend ACRONYM...  what to learn next, given what you know
    """
    graph, _report = _load_graph(data_file)
    try:
        if kind in ("ancestors", "descendants"):
            if len(args) != 1:
                _fail(f"query {kind} takes exactly one acronym", 2)
            fn = ancestors if kind == "ancestors" else descendants
            key = args[0].strip().upper()
            result = sorted(fn(graph, key, include_conceptual=include_conceptual))
        elif kind == "upgrades":
            if len(args) != 1:
                _fail("query upgrades takes exactly one acronym", 2)
            result = wire.records_payload(upgrade_candidates(graph, args[0].strip().upper()))
        elif kind == "area":
            if not args:
                _fail("query area takes an area name", 2)
            view = area_subgraph(graph, " ".join(args))
            result = wire.subgraph_document(view, graph)
        elif kind == "search":
            if not args:
                _fail("query search takes the text to look for", 2)
            result = wire.records_payload(search(graph, " ".join(args), limit))
        else:  # recommend
            if not args:
                _fail("query recommend takes the acronyms you already know", 2)
            known = {a.strip().upper() for a in args}
            result = wire.recommendations_payload(recommend(graph, known, k=k))
    except UnknownAcronymError as exc:
        _fail(f"unknown acronym {exc.args[0]}", 2)
    except UnknownAreaError as exc:
        _fail(f"unknown area {exc.args[0]!r}", 2)
    except ValueError as exc:
        _fail(str(exc), 2)
    click.echo(wire.dumps(result))


@main.command()
@click.argument("data_file")
@click.option("--dim", type=click.Choice(["2", "3"]), default="3", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write JSON here instead of stdout.")
@click.option("--figure", type=click.Path(dir_okay=False), help="Also draw the layout to this image file.")
def layout(data_file: str, dim: str, seed: int, out: str | None, figure: str | None) -> None:
    """Run the force simulation and emit positions as JSON."""
    graph, _report = _load_graph(data_file)
    params = replace(LayoutParams(), dimensions=int(dim), seed=seed)
    try:
        positions, stats = run(graph, params)
        document = wire.export_layout(positions, graph)
    except ValueError as exc:
        _fail(str(exc), 2)
    text = wire.dumps(document) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    click.echo(
        f"{graph.node_count} nodes, {stats.iterations} iterations, "
        f"max residual force {stats.max_force:.3g}",
        err=True,
    )
    if figure:
        render_layout(document, figure)
        click.echo(f"figure written to {figure}", err=True)


@main.command()
@click.argument("data_file")
@click.option(
    "--format", "fmt", type=click.Choice(["csv", "json", "force-graph"]),
    default="csv", show_default=True,
)
@click.option("--out", type=click.Path(dir_okay=False), help="Write here instead of stdout.")
@click.option("--figure", type=click.Path(dir_okay=False), help="Also draw a default layout to this image file.")
def export(data_file: str, fmt: str, out: str | None, figure: str | None) -> None:
    """Re-serialize a dataset (canonical CSV, JSON records, or the
    node/link graph form). Conceptual references are always kept."""
    graph, _report = _load_graph(data_file)
    records = list(graph.nodes.values())
    if fmt == "csv":
        text = export_table(records)
    elif fmt == "json":
        text = export_records_json(records)
    else:
        text = wire.dumps(wire.graph_document(graph, include_conceptual=True)) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    if figure:
        positions, _stats = run(graph, LayoutParams())
        render_layout(wire.export_layout(positions, graph), figure)
        click.echo(f"figure written to {figure}", err=True)


@main.command()
@click.option("--host", default=None, help="Bind address (default from environment).")
@click.option("--port", type=int, default=None, help="Port (default from environment).")
@click.option("--data", type=click.Path(dir_okay=False), default=None, help="Dataset file.")
def serve(host: str | None, port: int | None, data: str | None) -> None:
    """Start the HTTP API."""
    import uvicorn

    from .server import create_app

    try:
        settings = settings_from_env()
    except ValueError as exc:
        _fail(str(exc), 2)
    if data is not None:
        settings = replace(settings, data_path=data)
    if host is not None:
        settings = replace(settings, host=host)
    if port is not None:
        settings = replace(settings, port=port)
    try:
        app = create_app(settings)
    except (DatastoreError, TableFormatError) as exc:
        _fail(str(exc), 2)
    uvicorn.run(app, host=settings.host, port=settings.port, log_level="info")


if __name__ == "__main__":
    main()
