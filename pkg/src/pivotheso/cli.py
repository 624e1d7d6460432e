"""Command-line interface.

Exit codes: 0 success, 1 domain error, 2 usage error. ``validate`` exits 1
iff any error-severity diagnostic is reported.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys
from contextlib import contextmanager
from pathlib import Path

import click
from filelock import FileLock

from . import align as align_ops
from . import descriptor as desc_ops
from . import referential as ref_ops
from . import validator
from .errors import DuplicateConcept, DuplicateScheme, PivothesoError, UnknownScheme
from .model import MatchType, Profile, Severity
from .turtle import parse_turtle_bytes, serialize_turtle, to_graph
from .workspace import Workspace, load_config

MATCH_CHOICES = {m.value: m for m in MatchType}


def domain_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PivothesoError as exc:
            click.echo(f"error [{exc.code}]: {exc.message}", err=True)
            sys.exit(1)
    return wrapper


@click.group()
@click.option("--store", "store_path", default=None, envvar="PIVOTHESO_STORE",
              help="Path of the native store file.")
@click.option("--config", "config_path", default=None, type=click.Path(path_type=Path),
              help="Config file (key=value lines); default ./pivotheso.conf")
@click.pass_context
def cli(ctx, store_path, config_path):
    """Thesaurus engine and alignment workbench."""
    ctx.ensure_object(dict)
    ctx.obj["store_path"] = store_path
    ctx.obj["config_path"] = config_path


def _config(ctx):
    return load_config(ctx.obj.get("store_path"), ctx.obj.get("config_path"))


def _workspace(ctx) -> Workspace:
    return Workspace(_config(ctx))


@contextmanager
def _mutating(ctx):
    """Exclusive file lock over the whole read-modify-write cycle."""
    config = _config(ctx)
    lock = FileLock(str(config.store_path) + ".lock")
    with lock.acquire(timeout=30):
        ws = Workspace(config)
        yield ws
        ws.save()


@cli.command("import")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--profile", "profiles", multiple=True, metavar="SCHEME=PROFILE",
              help="Set a scheme's profile on import (documentary or research).")
@click.pass_context
@domain_errors
def import_cmd(ctx, file, profiles):
    """Import a Turtle file into the workspace store."""
    overrides: dict[str, Profile] = {}
    for item in profiles:
        scheme, sep, profile = item.partition("=")
        if not sep or profile not in (p.value for p in Profile):
            raise click.UsageError(f"--profile expects SCHEME=documentary|research, got {item!r}")
        overrides[scheme] = Profile(profile)
    doc = parse_turtle_bytes(file.read_bytes())
    for warning in doc.warnings:
        click.echo(f"warning: {warning}", err=True)
    with _mutating(ctx) as ws:
        imported = to_graph(
            doc,
            naan=ws.config.ark_naan,
            prefix=ws.config.ark_prefix,
            default_lang=ws.config.default_lang,
        )
        for sid, profile in overrides.items():
            if sid not in imported.schemes:
                raise UnknownScheme(f"--profile names unknown scheme {sid!r}")
            imported.schemes[sid].profile = profile
        store = ws.store
        for sid, scheme in imported.schemes.items():
            if sid in store.schemes:
                # cross-thesaurus stubs accumulate in one shared scheme
                if sid == "external":
                    store.schemes[sid].top_concepts |= scheme.top_concepts
                    continue
                raise DuplicateScheme(f"scheme {sid!r} already exists in the store")
            store.schemes[sid] = scheme
        for cid, concept in imported.concepts.items():
            existing = store.concepts.get(cid)
            if existing is not None:
                if existing.scheme == "external" == concept.scheme:
                    continue
                raise DuplicateConcept(f"concept {cid!r} already exists in the store")
            store.concepts[cid] = concept
        for mapping in (imported.mappings[mid] for mid in sorted(imported.mappings)):
            mapping.id = store.next_mapping_id()
            store.mappings[mapping.id] = mapping
        store.reindex()
    click.echo(
        f"imported {len(imported.schemes)} scheme(s), {len(imported.concepts)} concept(s), "
        f"{len(imported.mappings)} mapping(s)"
    )


@cli.command("export")
@click.argument("scheme")
@click.argument("file", type=click.Path(path_type=Path))
@click.pass_context
@domain_errors
def export_cmd(ctx, scheme, file):
    """Export one scheme as canonical Turtle."""
    ws = _workspace(ctx)
    ws.store.scheme(scheme)
    file.write_text(serialize_turtle(ws.store, [scheme]), encoding="utf-8")
    click.echo(f"exported {scheme} to {file}")


@cli.command("validate")
@click.argument("scheme")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
@domain_errors
def validate_cmd(ctx, scheme, fmt):
    """Run the rule engine; exit 1 iff any error-severity diagnostic."""
    ws = _workspace(ctx)
    diagnostics = validator.validate(ws.store, scheme)
    for d in diagnostics:
        click.echo(json.dumps(d.as_dict(), ensure_ascii=False) if fmt == "json" else d.render())
    errors = sum(1 for d in diagnostics if d.severity is Severity.ERROR)
    if fmt == "text":
        click.echo(f"{errors} error(s), {len(diagnostics) - errors} warning(s)")
    if errors:
        sys.exit(1)


@cli.command("paths")
@click.argument("ark")
@click.pass_context
@domain_errors
def paths_cmd(ctx, ark):
    """Print every root-first access path of a concept."""
    ws = _workspace(ctx)
    for path in ws.store.paths_to_top(ark):
        click.echo(path)


@cli.group()
def align():
    """Cross-scheme alignment."""


@align.command("suggest")
@click.argument("src")
@click.argument("tgt")
@click.option("--min-score", type=float, default=align_ops.DEFAULT_MIN_SCORE, show_default=True)
@click.option("--with-ids", is_flag=True, help="Append the persisted mapping id column.")
@click.pass_context
@domain_errors
def align_suggest(ctx, src, tgt, min_score, with_ids):
    """Compute suggestions, persist them as suggested mappings, print CSV."""
    with _mutating(ctx) as ws:
        candidates = align_ops.suggest_mappings(ws.store, src, tgt, min_score)
        persisted = align_ops.record_suggestions(ws.store, candidates)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["source_ark", "source_label", "target_ark", "target_label",
              "tier", "score", "recommended_type"]
    if with_ids:
        header.append("mapping_id")
    writer.writerow(header)
    for cand, mapping in zip(candidates, persisted):
        row = [
            cand.source, ws.store.label_of(cand.source),
            cand.target, ws.store.label_of(cand.target),
            cand.tier.value, cand.score, cand.recommended.value,
        ]
        if with_ids:
            row.append(mapping.id)
        writer.writerow(row)
    click.echo(buf.getvalue(), nl=False)


@align.command("decide")
@click.argument("mapping_id")
@click.argument("decision", type=click.Choice(["accept", "reject"]))
@click.option("--type", "match_type", type=click.Choice(sorted(MATCH_CHOICES)), default=None,
              help="Override the recommended match type on accept.")
@click.pass_context
@domain_errors
def align_decide(ctx, mapping_id, decision, match_type):
    """Accept or reject a suggested mapping."""
    with _mutating(ctx) as ws:
        mapping = align_ops.decide(
            ws.store, mapping_id, decision,
            MATCH_CHOICES[match_type] if match_type else None,
        )
        inverse = align_ops.inverse_of(ws.store, mapping.id)
    click.echo(f"{mapping.id}: {mapping.status.value} "
               f"{mapping.source} -> {mapping.target} ({mapping.match_type.value})")
    if inverse is not None:
        click.echo(f"{inverse.id}: inverse {inverse.source} -> {inverse.target} "
                   f"({inverse.match_type.value})")


@cli.group()
def ref():
    """Millésimé referentials."""


@ref.command("register")
@click.argument("scheme")
@click.argument("root_ark")
@click.argument("biblio_key")
@click.argument("millesime", type=int)
@click.option("--id", "ref_id", default=None, help="Explicit referential id.")
@click.pass_context
@domain_errors
def ref_register(ctx, scheme, root_ark, biblio_key, millesime, ref_id):
    """Register a referential anchored on ROOT_ARK."""
    with _mutating(ctx) as ws:
        r = ref_ops.register_referential(
            ws.store, scheme, root_ark, biblio_key, millesime, ref_id=ref_id,
        )
    counts = ", ".join(f"{k}={v}" for k, v in sorted(r.role_counts.items()))
    click.echo(f"registered {r.id} ({r.biblio_key}, {r.millesime}); {counts}")


@ref.command("freeze")
@click.argument("ref_id")
@click.pass_context
@domain_errors
def ref_freeze(ctx, ref_id):
    """Freeze a referential branch."""
    with _mutating(ctx) as ws:
        ref_ops.freeze(ws.store, ref_id)
    click.echo(f"froze {ref_id}")


@ref.command("diff")
@click.argument("old_id")
@click.argument("new_id")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
@domain_errors
def ref_diff(ctx, old_id, new_id, fmt):
    """Compare two referential branches."""
    ws = _workspace(ctx)
    diff = ref_ops.diff_referentials(ws.store, old_id, new_id)
    if fmt == "json":
        click.echo(json.dumps({
            "added": sorted(diff.added),
            "removed": sorted(diff.removed),
            "redefined": [list(t) for t in sorted(diff.redefined)],
            "moved": [list(t) for t in sorted(diff.moved)],
        }, ensure_ascii=False, indent=2))
        return
    for label in sorted(diff.added):
        click.echo(f"added      {label}")
    for label in sorted(diff.removed):
        click.echo(f"removed    {label}")
    for label, old, new in sorted(diff.redefined):
        click.echo(f"redefined  {label} ({old or '-'} -> {new or '-'})")
    for label, old, new in sorted(diff.moved):
        click.echo(f"moved      {label} ({old} -> {new})")
    if diff.empty:
        click.echo("no differences")


@cli.group()
def desc():
    """Artifact descriptions."""


@desc.command("ingest")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--ref", "ref_id", required=True)
@click.pass_context
@domain_errors
def desc_ingest(ctx, file, ref_id):
    """Ingest an inventory CSV; prints the rejects report CSV on stderr."""
    with _mutating(ctx) as ws:
        stored, rejects = desc_ops.ingest_inventory(ws.store, file.read_bytes(), ref_id)
    click.echo(f"stored {len(stored)} description(s), rejected {len(rejects)} row(s)")
    if rejects:
        click.echo(desc_ops.rejects_report_csv(rejects), err=True, nl=False)


@desc.command("ceiling")
@click.option("--ref", "ref_id", required=True)
@click.option("--verbose", is_flag=True)
@click.pass_context
@domain_errors
def desc_ceiling(ctx, ref_id, verbose):
    """Print the theoretical combination ceiling of a referential."""
    ws = _workspace(ctx)
    ceiling = desc_ops.combination_ceiling(ws.store, ref_id)
    click.echo(str(ceiling.ceiling))
    if verbose:
        click.echo(
            f"{ceiling.n_categories} categories x {ceiling.n_types} types "
            f"({ceiling.n_formes} forms)", err=True,
        )


@cli.command("serve")
@click.option("--listen", default=None, metavar="HOST:PORT")
@click.option("--ui-dir", type=click.Path(path_type=Path), default=None)
@click.pass_context
@domain_errors
def serve_cmd(ctx, listen, ui_dir):
    """Run the HTTP API (and the review UI, when built)."""
    import uvicorn

    from .server import create_app

    config = _config(ctx)
    if listen:
        config.listen_address = listen
        config.__post_init__()
    if ui_dir:
        config.ui_dir = ui_dir
    ws = Workspace(config)
    uvicorn.run(create_app(ws), host=config.host, port=config.port, log_level="info")


def main():
    cli(prog_name="pivotheso")


if __name__ == "__main__":
    main()
