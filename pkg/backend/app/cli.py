"""
Command-line interface for laminar detection.

Usage:
    python cli.py validate --input manifold.tri
    python cli.py detect --input manifold.tri --budget 3 --report json
    python cli.py verify --input manifold.tri --certificate cert.json

Exit codes: 0 when a result was produced, 2 for invalid input, 3 for an
internal invariant violation or an unexpected failure.
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional

import click
import orjson

from core.config import override_settings, settings
from core.logging_setup import setup_logging
from services.branched import (
    BranchedSurfaceError,
    DiskSelection,
    ProvenanceError,
    candidates,
    carries_sphere_or_torus,
    closed_surface_evidence,
    disks_of_contact,
    format_selection,
    incompressible_reebless_report,
    laminar_check,
    parse_branched_surface,
    serialize_branched_surface,
    sink_disks,
)
from services.engine import (
    CertificateError,
    EngineError,
    InvariantViolationError,
    detect,
    load_certificate,
    render_text,
    save_certificate,
    verdict_to_json,
    verify_certificate,
)
from services.normal import NormalSurfaceError, vertex_solution_records
from services.splitting import (
    ComplexEnumerator,
    SplittingError,
    format_radius,
    lamalg2,
    radius,
    serialize_complex,
)
from services.tri import Triangulation, TriangulationError, parse_triangulation, validate
from utils.helpers import format_vector

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_INTERNAL = 3

INPUT_ERRORS = (
    TriangulationError,
    NormalSurfaceError,
    BranchedSurfaceError,
    SplittingError,
    CertificateError,
    ValueError,
    OSError,
)

REPORT_OPTION = click.option(
    "--report", "report", type=click.Choice(["text", "json"]), default="text", show_default=True,
    help="Output format",
)


def guarded(command: Callable[..., None]) -> Callable[..., None]:
    """Map library exceptions to the documented exit codes."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            command(*args, **kwargs)
        except InvariantViolationError as e:
            click.echo(f"internal invariant violated: {e}", err=True)
            sys.exit(EXIT_INTERNAL)
        except (EngineError, *INPUT_ERRORS) as e:
            click.echo(f"invalid input: {e}", err=True)
            sys.exit(EXIT_INVALID_INPUT)
        except Exception as e:
            logger.exception("Unexpected failure")
            click.echo(f"internal error: {e}", err=True)
            sys.exit(EXIT_INTERNAL)

    return wrapper


def _read_triangulation(path: str) -> Triangulation:
    return parse_triangulation(Path(path).read_text(encoding="utf-8"))


def _emit_json(payload: Any) -> None:
    click.echo(orjson.dumps(payload, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2).decode("utf-8"))


@click.group()
@click.option("--log-level", default=None, help="Override LAMINAR_LOG_LEVEL")
def cli(log_level: Optional[str]) -> None:
    """Laminar detection for triangulated closed 3-manifolds."""
    setup_logging(log_level)


@cli.command("validate")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@REPORT_OPTION
@guarded
def validate_command(input_path: str, report: str) -> None:
    """Parse a gluing table and report closedness, orientability and manifoldness."""
    result = validate(_read_triangulation(input_path))
    if report == "json":
        _emit_json(result.model_dump(mode="json"))
        return
    vertices, edges, faces, tetrahedra = result.skeleton_counts
    click.echo(f"closed: {result.closed}")
    click.echo(f"orientable: {result.orientable}")
    click.echo(f"manifold: {result.manifold}")
    click.echo(f"euler characteristic: {result.euler_characteristic}")
    click.echo(f"skeleton: {vertices} vertices, {edges} edges, {faces} faces, {tetrahedra} tetrahedra")
    if result.singular_vertices:
        click.echo(f"singular vertices: {list(result.singular_vertices)}")
    if result.reversed_edges:
        click.echo(f"self-reversed edges: {list(result.reversed_edges)}")


@cli.command("vertex-surfaces")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@REPORT_OPTION
@guarded
def vertex_surfaces_command(input_path: str, report: str) -> None:
    """List the admissible vertex normal surfaces with their topology."""
    records = vertex_solution_records(_read_triangulation(input_path))
    if report == "json":
        _emit_json([record.model_dump(mode="json") for record in records])
        return
    for record in records:
        info = record.info
        link = " (vertex link)" if record.vertex_link else ""
        click.echo(f"{record.vector}  {info.classification} chi={info.euler_characteristic} weight={info.weight}{link}")
    click.echo(f"{len(records)} vertex solutions")


@cli.command("candidates")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--show", is_flag=True, help="Print every candidate in branched-surface text format")
@REPORT_OPTION
@guarded
def candidates_command(input_path: str, show: bool, report: str) -> None:
    """List candidate branched surfaces up to symmetry."""
    triangulation = _read_triangulation(input_path)
    found = candidates(triangulation, limit=settings.max_candidates)
    rows = []
    for index, surface in enumerate(found):
        rows.append({
            "candidate_id": f"c{index}",
            "selection": format_selection(DiskSelection(types=surface.embedding.selection)),
            "polygons": len(surface.polygons),
            "branch_edges": len(surface.branch_edges()),
            "passes_filter": bool(surface.branch_edges()) and not carries_sphere_or_torus(surface),
        })
    if report == "json":
        _emit_json(rows)
        return
    for row, surface in zip(rows, found):
        verdict = "passes filter" if row["passes_filter"] else "filtered out"
        click.echo(f"{row['candidate_id']} [{row['selection']}] {row['polygons']} polygons, {row['branch_edges']} branch edges, {verdict}")
        if show:
            click.echo(serialize_branched_surface(surface))
    click.echo(f"{len(found)} candidates")


def _read_branched(path: str, triangulation_path: Optional[str]):
    triangulation = _read_triangulation(triangulation_path) if triangulation_path else None
    return parse_branched_surface(Path(path).read_text(encoding="utf-8"), triangulation), triangulation


@cli.command("check-branched")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--triangulation", "triangulation_path", type=click.Path(exists=True, dir_okay=False),
              help="Gluing table for surfaces that carry a selection line")
@REPORT_OPTION
@guarded
def check_branched_command(input_path: str, triangulation_path: Optional[str], report: str) -> None:
    """Run the carried-surface queries and laminarity checks on a branched surface."""
    surface, triangulation = _read_branched(input_path, triangulation_path)
    payload = {
        "polygons": len(surface.polygons),
        "branch_edges": len(surface.branch_edges()),
        "sink_disks": sink_disks(surface),
        "carried_closed": [
            {"classification": c.classification, "weights": format_vector(c.weights), "euler_characteristic": c.euler_characteristic}
            for c in closed_surface_evidence(surface)
        ],
        "carries_sphere_or_torus": carries_sphere_or_torus(surface),
        "disks_of_contact": [
            {"components": list(d.components), "weights": format_vector(d.weights), "weight": d.weight}
            for d in disks_of_contact(surface, settings.box_cap)
        ],
    }
    try:
        check = laminar_check(surface)
        payload["laminar"] = check.laminar
        payload["bubbles"] = len(check.bubbles)
    except ProvenanceError as e:
        payload["laminar"] = None
        payload["laminar_detail"] = str(e)
    if surface.embedding is not None:
        tiers = incompressible_reebless_report(surface, triangulation)
        payload["conditions"] = [c.model_dump(mode="json") for c in tiers.conditions]

    if report == "json":
        _emit_json(payload)
        return
    click.echo(f"{payload['polygons']} polygons, {payload['branch_edges']} branch edges")
    click.echo(f"sink disks: {payload['sink_disks']}")
    for carried in payload["carried_closed"]:
        click.echo(f"carries {carried['classification']} weights={carried['weights']} chi={carried['euler_characteristic']}")
    click.echo(f"carries sphere or torus: {payload['carries_sphere_or_torus']}")
    for contact in payload["disks_of_contact"]:
        click.echo(f"disk of contact on {contact['components']}: weights={contact['weights']} weight={contact['weight']}")
    if payload["laminar"] is None:
        click.echo(f"laminar: not checked ({payload['laminar_detail']})")
    else:
        click.echo(f"laminar: {payload['laminar']}")
    for condition in payload.get("conditions", []):
        click.echo(f"{condition['condition']}: {condition['status']}")


@cli.command("enumerate-splittings")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", type=click.IntRange(min=0), default=None, help="Maximum number of cells")
@click.option("--seed-order", type=click.Choice(["canonical"]), default="canonical", show_default=True)
@click.option("--radius-search", is_flag=True, help="Run the staged search for complexes of large radius instead")
@REPORT_OPTION
@guarded
def enumerate_splittings_command(
    input_path: str, budget: Optional[int], seed_order: str, radius_search: bool, report: str
) -> None:
    """Stream splitting complexes in canonical order with their radius."""
    surface = parse_branched_surface(Path(input_path).read_text(encoding="utf-8"))
    config = override_settings(default_budget=budget)
    logger.debug(f"Enumerating with seed order {seed_order}")
    if radius_search:
        outcome = lamalg2(
            surface, max(1, config.default_budget), cap=config.max_complexes_per_stage,
            profile_cap=config.max_profiles_per_stage,
        )
        if report == "json":
            payload = outcome.model_dump(mode="json", exclude={"witness"})
            payload["witness"] = outcome.witness_text
            _emit_json(payload)
        else:
            click.echo(f"{outcome.status} at N={outcome.n}")
            if outcome.witness is not None:
                click.echo(f"witness R={outcome.witness_radius}: {outcome.witness_text}")
        return

    enumerator = ComplexEnumerator(surface, config.default_budget, cap=config.max_complexes_per_stage, workers=config.workers)
    rows = [
        {"complex": serialize_complex(complex_), "cells": complex_.cells, "radius": format_radius(radius(surface, complex_))}
        for complex_ in enumerator
    ]
    if report == "json":
        _emit_json({"complexes": rows, "examined": enumerator.examined, "capped": enumerator.capped})
        return
    for row in rows:
        click.echo(f"{row['cells']} cells  R={row['radius']}  {row['complex']}")
    suffix = " (capped)" if enumerator.capped else ""
    click.echo(f"{len(rows)} complexes, {enumerator.examined} pairings examined{suffix}")


@cli.command("detect")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", type=click.IntRange(min=1), default=None, help="Tandem budget: cells of the largest laminar-splitting complex tried")
@click.option("--doc-rounds", type=click.IntRange(min=0), default=None, help="Disk-of-contact elimination rounds")
@click.option("--assert-one-efficient", is_flag=True, help="Accept the triangulation as one-efficient")
@click.option("--seed-order", type=click.Choice(["canonical"]), default="canonical", show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--certificate-out", type=click.Path(dir_okay=False), default=None,
              help="Write the certificate here when laminarity is certified")
@REPORT_OPTION
@guarded
def detect_command(
    input_path: str,
    budget: Optional[int],
    doc_rounds: Optional[int],
    assert_one_efficient: bool,
    seed_order: str,
    workers: Optional[int],
    certificate_out: Optional[str],
    report: str,
) -> None:
    """Run the budgeted detection pipeline and print the verdict."""
    config = override_settings(default_budget=budget, doc_rounds=doc_rounds, workers=workers)
    logger.debug(f"Detecting with seed order {seed_order}")
    verdict = detect(_read_triangulation(input_path), config, assert_one_efficient=assert_one_efficient)
    if certificate_out and verdict.certificate is not None:
        save_certificate(verdict.certificate, certificate_out)
    if report == "json":
        click.echo(verdict_to_json(verdict).decode("utf-8"))
    else:
        click.echo(render_text(verdict), nl=False)


@cli.command("verify")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--certificate", "certificate_path", required=True, type=click.Path(exists=True, dir_okay=False))
@REPORT_OPTION
@guarded
def verify_command(input_path: str, certificate_path: str, report: str) -> None:
    """Replay a certificate file against a gluing table."""
    check = verify_certificate(_read_triangulation(input_path), load_certificate(certificate_path))
    if report == "json":
        _emit_json(check.model_dump(mode="json"))
    elif check.valid:
        click.echo("certificate valid")
    else:
        click.echo(f"certificate invalid at {check.failed_step!r}: {check.detail}")
    sys.exit(EXIT_OK if check.valid else EXIT_INVALID_INPUT)


if __name__ == "__main__":
    cli()
