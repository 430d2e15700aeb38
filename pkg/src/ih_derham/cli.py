from __future__ import annotations

import json
import logging
from collections.abc import Callable, Iterator
from contextlib import contextmanager

import typer

from ih_derham.runtime.log_setup import configure_logging
from ih_derham.runtime.reporting import (
    HEURISTIC_WARNING,
    Report,
    build_report,
    homology_table,
    render_json,
    render_table,
)
from ih_derham.runtime.settings import ToolSettings, parse_log_level
from ih_derham.topology.corpus import corpus_entries, corpus_entry
from ih_derham.topology.domain.data_types import (
    Coefficients,
    NotFoundError,
    TopologyError,
    ValidationError,
)
from ih_derham.topology.storage import resolve_repository
from ih_derham.topology.storage.documents import complex_to_document
from ih_derham.topology.topology_service import LoadedComplex, TopologyService

logger = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, no_args_is_help=True, help="Intersection homology and flat norms on simplicial pseudomanifolds.")
corpus_app = typer.Typer(add_completion=False, no_args_is_help=True, help="Built-in reference complexes.")
app.add_typer(corpus_app, name="corpus")

PATH_HELP = "Complex document (.json, .yaml, .yml), '-' for JSON on stdin, or corpus:<name>."


@contextmanager
def _errors() -> Iterator[None]:
    """Print library errors as '<code>: <message>'; input errors exit 1, domain failures exit 2."""
    try:
        yield
    except TopologyError as e:
        typer.echo(f"{e.code}: {e}", err=True)
        raise typer.Exit(code=1 if isinstance(e, ValidationError | NotFoundError) else 2) from e


def _load(ref: str) -> tuple[TopologyService, LoadedComplex]:
    repo, name = resolve_repository(ref)
    logger.info("loading %s via %s", name, type(repo).__name__)
    service = TopologyService(repo)
    return service, service.load(name)


def _emit(report: Report, json_output: bool, human: Callable[[], None]) -> None:
    if json_output:
        typer.echo(render_json(report))
        return
    human()
    for warning in report.warnings:
        typer.echo(f"warning: {warning}", err=True)


@app.callback()
def _global_options(
    log_level: str | None = typer.Option(
        None, "--log-level", help="Log level for stderr (can also be set via IH_DERHAM_LOG_LEVEL)."
    ),
) -> None:
    with _errors():
        settings = ToolSettings.load()
        configure_logging(parse_log_level(log_level) if log_level else settings.log_level)


# ----- Commands -----
@app.command()
def check(
    path: str = typer.Argument(..., help=PATH_HELP),
    json_output: bool = typer.Option(False, "--json", help="Machine-readable report only."),
) -> None:
    """Pseudomanifold and normality tests. Exits 2 when the input is not a pseudomanifold."""
    with _errors():
        service, loaded = _load(path)
        result = service.check(loaded)
    report = build_report("check", loaded.digest, result)

    def human() -> None:
        normal = "-" if result.is_normal is None else result.is_normal
        rows = [
            ("dimension", result.dimension),
            ("f-vector", tuple(result.f_vector)),
            ("components", result.components),
            ("pseudomanifold", result.is_pseudomanifold),
            ("normal", normal),
            ("strongly connected", result.pseudomanifold.strongly_connected),
        ]
        typer.echo(render_table(["property", "value"], rows))
        for ridge in result.pseudomanifold.bad_ridges[:10]:
            typer.echo(f"face {ridge.face} lies in {ridge.facet_count} facets")
        for face in result.pseudomanifold.impure_faces[:10]:
            typer.echo(f"facet {face} is below the top dimension")
        if result.bad_vertices:
            typer.echo(f"vertices with disconnected links: {result.bad_vertices}")

    _emit(report, json_output, human)
    if not result.is_pseudomanifold:
        raise typer.Exit(code=2)


@app.command("homology")
def homology_cmd(
    path: str = typer.Argument(..., help=PATH_HELP),
    coefficients: Coefficients | None = typer.Option(None, "--coefficients", help="int (with torsion) or rat."),
    json_output: bool = typer.Option(False, "--json", help="Machine-readable report only."),
) -> None:
    """Simplicial homology with torsion."""
    with _errors():
        service, loaded = _load(path)
        result = service.homology(loaded, coefficients)
    _emit(build_report("homology", loaded.digest, result), json_output, lambda: typer.echo(homology_table(result)))


@app.command("cohomology")
def cohomology_cmd(
    path: str = typer.Argument(..., help=PATH_HELP),
    coefficients: Coefficients | None = typer.Option(None, "--coefficients", help="int (with torsion) or rat."),
    json_output: bool = typer.Option(False, "--json", help="Machine-readable report only."),
) -> None:
    """Simplicial cohomology; integer torsion sits one degree above homology's."""
    with _errors():
        service, loaded = _load(path)
        result = service.cohomology(loaded, coefficients)
    _emit(build_report("cohomology", loaded.digest, result), json_output, lambda: typer.echo(homology_table(result)))


@app.command("ih")
def ih_cmd(
    path: str = typer.Argument(..., help=PATH_HELP),
    perversity: str = typer.Option("top", "--perversity", help="top | zero | custom:<p(2)>,<p(3)>,..."),
    coefficients: Coefficients | None = typer.Option(None, "--coefficients", help="int (with torsion) or rat."),
    json_output: bool = typer.Option(False, "--json", help="Machine-readable report only."),
) -> None:
    """Intersection homology for the document's strata, or the heuristic default stratification."""
    with _errors():
        service, loaded = _load(path)
        result = service.intersection_homology(loaded, perversity, coefficients)
    warnings = [HEURISTIC_WARNING] if result.heuristic_stratification else []
    report = build_report("ih", loaded.digest, result, warnings)

    def human() -> None:
        origin = "heuristic (link screen)" if result.heuristic_stratification else "from input"
        typer.echo(f"stratification: {origin}")
        typer.echo(f"singular faces: {result.singular_faces or 'none'}")
        typer.echo(f"perversity: {result.perversity}")
        typer.echo(homology_table(result.homology))

    _emit(report, json_output, human)


@app.command("normalize")
def normalize_cmd(
    path: str = typer.Argument(..., help=PATH_HELP),
    json_output: bool = typer.Option(False, "--json", help="Machine-readable report only."),
) -> None:
    """Separate the sheets of a pseudomanifold; the report carries the normalized complex and its projection."""
    with _errors():
        service, loaded = _load(path)
        result = service.normalize(loaded)
    report = build_report("normalize", loaded.digest, result)

    def human() -> None:
        multi = {k: n for k, n in result.sheet_count.items() if n > 1}
        rows = [
            ("facets", len(result.normalized.facets)),
            ("components", result.components),
            ("faces with several sheets", len(multi)),
            ("projection check", "ok" if result.check.ok else "FAILED"),
        ]
        typer.echo(render_table(["property", "value"], rows))
        for key, n in multi.items():
            typer.echo(f"{key}: {n} sheets")
        for violation in result.check.violations:
            typer.echo(f"violation: {violation}")

    _emit(report, json_output, human)


@app.command("flatnorm")
def flatnorm_cmd(
    path: str = typer.Argument(..., help=PATH_HELP),
    chain: str = typer.Option(..., "--chain", help='Chain as inline JSON ({"0-1": "3/2"}) or a path to one.'),
    oracle_bound: int | None = typer.Option(
        None, "--oracle-bound", help="Also run the brute-force search over integer A in [-bound, bound]."
    ),
    json_output: bool = typer.Option(False, "--json", help="Machine-readable report only."),
) -> None:
    """Exact flat norm of a chain, with its decomposition T = R + dA."""
    with _errors():
        service, loaded = _load(path)
        result = service.flat_norm(loaded, chain, oracle_bound)
    report = build_report("flatnorm", loaded.digest, result)

    def human() -> None:
        typer.echo(f"flat norm: {result.value}")
        typer.echo(f"mass: {result.mass}")
        if result.oracle is not None:
            typer.echo(f"brute force: {result.oracle}")
        typer.echo(f"A: {json.dumps(result.A, sort_keys=True)}")
        typer.echo(f"R: {json.dumps(result.R, sort_keys=True)}")

    _emit(report, json_output, human)


@app.command("verify")
def verify_cmd(
    path: str = typer.Argument(..., help=PATH_HELP),
    json_output: bool = typer.Option(False, "--json", help="Machine-readable report only."),
) -> None:
    """Compare top-perversity IH with the cohomology of the normalization. Exits 2 on mismatch."""
    with _errors():
        service, loaded = _load(path)
        result = service.verify(loaded)
    warnings = [HEURISTIC_WARNING] if result.heuristic_stratification else []
    report = build_report("verify", loaded.digest, result, warnings)

    def human() -> None:
        ih, coh = result.ih_top.betti, result.normalization_cohomology.betti
        rows = [(k, ih[k] if k < len(ih) else "-", coh[k] if k < len(coh) else "-") for k in range(max(len(ih), len(coh)))]
        typer.echo(render_table(["degree", "IH top", "H* normalization"], rows))
        typer.echo(f"match: {result.match}")
        typer.echo(f"regular part components: {result.regular_components}")
        typer.echo(f"H^0 of the normalization: {result.normalization_h0}")

    _emit(report, json_output, human)
    if not result.match:
        raise typer.Exit(code=2)


# ----- Corpus -----
@corpus_app.command("list")
def corpus_list(json_output: bool = typer.Option(False, "--json", help="Machine-readable report only.")) -> None:
    """Names of the built-in complexes."""
    entries = corpus_entries()
    results = [
        {
            "name": e.name,
            "description": e.description,
            "f_vector": list(e.complex.f_vector),
            "provenance": e.expected.provenance if e.expected else None,
        }
        for e in entries
    ]
    report = build_report("corpus list", None, results)
    rows = [
        (e.name, tuple(e.complex.f_vector), e.expected.provenance if e.expected else "-", e.description)
        for e in entries
    ]
    _emit(
        report,
        json_output,
        lambda: typer.echo(render_table(["name", "f-vector", "invariants", "description"], rows)),
    )


@corpus_app.command("emit")
def corpus_emit(name: str = typer.Argument(..., help="Corpus name, see `corpus list`.")) -> None:
    """Write a built-in complex as a JSON document on stdout."""
    with _errors():
        entry = corpus_entry(name)
    doc = complex_to_document(entry.complex)
    typer.echo(json.dumps(doc.model_dump(mode="json", exclude_none=True), sort_keys=True, indent=2))
