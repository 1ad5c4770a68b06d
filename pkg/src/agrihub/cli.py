"""Command-line interface.

All subcommands except ``serve`` operate directly on the configured data
directory as the admin; do not run them while a server holds the same
directory (single-writer journals).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .access import Capability, Grant
from .api import create_app, pattern_term_from_json, row_to_json, term_to_json
from .errors import AgrihubError
from .model import Iri
from .platform import Platform, PlatformConfig
from .stores.geometry import Point, Polygon
from .stores.graph import TriplePattern
from .wikinormia import definition_from_json, definition_to_json


def _load_platform(config_path: str) -> Platform:
    return Platform(PlatformConfig.from_file(config_path))


def _echo_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


@click.group()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True), help="Path to the config file.")
@click.pass_context
def main(ctx, config_path):
    """Semantic data platform for agricultural machine and field data."""
    ctx.obj = config_path


def _platform(ctx) -> Platform:
    return _load_platform(ctx.obj)


def _admin(platform: Platform) -> str:
    return platform.config.admin_token


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--ui-dir", default=None, type=click.Path(exists=True),
              help="Serve the built web client from this directory at /ui.")
@click.pass_context
def serve(ctx, host, port, ui_dir):
    """Run the HTTP API (optionally with the web client at /ui)."""
    import uvicorn

    platform = _platform(ctx)
    app = create_app(platform)
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--format", "format_iri", default=None,
              help="Skip detection and use this format IRI.")
@click.pass_context
def ingest(ctx, path, format_iri):
    """Ingest a file (or an ISOXML task-data directory)."""
    platform = _platform(ctx)
    source = Path(path)
    if source.is_dir():
        import io
        import zipfile

        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w") as archive:
            for child in sorted(source.iterdir()):
                if child.is_file():
                    archive.writestr(child.name, child.read_bytes())
        data, hint = buf.getvalue(), source.name + ".zip"
    else:
        data, hint = source.read_bytes(), source.name
    receipt = platform.ingest_file(
        data, hint, format_hint=Iri(format_iri) if format_iri else None,
        token=_admin(platform))
    _echo_json(receipt.to_json())


@main.group()
def vocab():
    """Wikinormia format registry."""


@vocab.command("list")
@click.option("--status", type=click.Choice(["draft", "final"]), default=None)
@click.pass_context
def vocab_list(ctx, status):
    platform = _platform(ctx)
    rows = platform.formats.list_formats(status)
    _echo_json([{"formatIri": iri.value, "label": label, "status": st,
                 "version": version} for iri, label, st, version in rows])


@vocab.command("show")
@click.argument("format_iri")
@click.option("--version", type=int, default=None)
@click.pass_context
def vocab_show(ctx, format_iri, version):
    platform = _platform(ctx)
    _echo_json(definition_to_json(
        platform.formats.get_format(Iri(format_iri), version)))


@vocab.command("import")
@click.argument("json_file", type=click.Path(exists=True))
@click.pass_context
def vocab_import(ctx, json_file):
    platform = _platform(ctx)
    with open(json_file, encoding="utf-8") as fh:
        definition = definition_from_json(json.load(fh))
    iri = platform.formats.create_draft(definition)
    _echo_json({"formatIri": iri.value, "status": "draft"})


@vocab.command("finalize")
@click.argument("format_iri")
@click.pass_context
def vocab_finalize(ctx, format_iri):
    platform = _platform(ctx)
    version = platform.formats.finalize(Iri(format_iri))
    _echo_json({"formatIri": format_iri, "status": "final", "version": version})


@main.group()
def query():
    """Query the three stores."""


@query.command("graph")
@click.argument("patterns_json")
@click.option("--graphs", default=None,
              help="Comma-separated graph IRIs (default: all readable).")
@click.option("--expand-same-as", is_flag=True, default=False)
@click.option("--token", default=None, help="Service token (default: admin).")
@click.pass_context
def query_graph(ctx, patterns_json, graphs, expand_same_as, token):
    """PATTERNS_JSON: [{"subject": {...}, "predicate": {...}, "object": {...}}]."""
    platform = _platform(ctx)
    patterns = [
        TriplePattern(pattern_term_from_json(p.get("subject")),
                      pattern_term_from_json(p.get("predicate")),
                      pattern_term_from_json(p.get("object")))
        for p in json.loads(patterns_json)
    ]
    graph_iris = [Iri(g) for g in graphs.split(",")] if graphs else None
    bindings = platform.query_graph(token or _admin(platform), patterns,
                                    graph_iris, expand_same_as)
    _echo_json([{k: term_to_json(v) for k, v in b.items()} for b in bindings])


@query.command("spatial")
@click.option("--bbox", required=True,
              help="minLon,minLat,maxLon,maxLat query rectangle.")
@click.option("--mode", type=click.Choice(["intersects", "within-distance"]),
              default="intersects", show_default=True)
@click.option("--meters", type=float, default=None)
@click.option("--token", default=None)
@click.pass_context
def query_spatial(ctx, bbox, mode, meters, token):
    platform = _platform(ctx)
    parts = [float(x) for x in bbox.split(",")]
    if len(parts) != 4:
        raise click.UsageError("bbox needs four numbers")
    min_lon, min_lat, max_lon, max_lat = parts
    if mode == "within-distance":
        shape = Point(((min_lon + max_lon) / 2, (min_lat + max_lat) / 2))
    else:
        shape = Polygon(((min_lon, min_lat), (max_lon, min_lat),
                         (max_lon, max_lat), (min_lon, max_lat),
                         (min_lon, min_lat)))
    features = platform.query_spatial(token or _admin(platform), shape,
                                      mode=mode, meters=meters)
    from .api import feature_to_json
    _echo_json([feature_to_json(f) for f in features])


@query.command("series")
@click.argument("series_iri")
@click.option("--from", "from_ms", type=int, default=0, show_default=True)
@click.option("--to", "to_ms", type=int, default=2**62)
@click.option("--columns", default=None, help="Comma-separated property IRIs.")
@click.option("--token", default=None)
@click.pass_context
def query_series(ctx, series_iri, from_ms, to_ms, columns, token):
    platform = _platform(ctx)
    column_iris = [Iri(c) for c in columns.split(",")] if columns else None
    rows = platform.query_timeseries(token or _admin(platform),
                                     Iri(series_iri), from_ms, to_ms,
                                     column_iris)
    _echo_json([row_to_json(r) for r in rows])


@main.command()
@click.argument("service_id")
@click.option("--grants-json", default="[]",
              help='[{"graphPattern": ..., "capability": ...}].')
@click.pass_context
def grant(ctx, service_id, grants_json):
    """Create a service if needed and replace its grant list."""
    platform = _platform(ctx)
    token = None
    if service_id not in platform.access.list_services():
        token = platform.create_service(_admin(platform), service_id)
    grants = [Grant(g["graphPattern"], Capability(g["capability"]))
              for g in json.loads(grants_json)]
    account = platform.manage_grants(_admin(platform), service_id, grants)
    payload = {"serviceId": account.service_id,
               "grants": [{"graphPattern": g.graph_pattern,
                           "capability": g.capability.value}
                          for g in account.grants]}
    if token:
        payload["token"] = token  # shown once; only the hash is stored
    _echo_json(payload)


@main.command()
@click.argument("timelog_iri")
@click.option("--gap-seconds", type=int, default=300, show_default=True)
@click.option("--min-rows", type=int, default=10, show_default=True)
@click.option("--token", default=None)
@click.pass_context
def separate(ctx, timelog_iri, gap_seconds, min_rows, token):
    """Run the field separation service on a timelog."""
    platform = _platform(ctx)
    result = platform.run_separation(token or _admin(platform),
                                     Iri(timelog_iri), gap_seconds, min_rows)
    _echo_json({
        "runId": result.run_id,
        "stats": result.stats,
        "segments": [{"label": s.label_text, "rows": len(s.rows)}
                     for s in result.segments],
        "fieldSeries": {f.value: s.value
                        for f, s in result.field_series.items()},
    })


def entrypoint():
    try:
        main(standalone_mode=True)
    except AgrihubError as exc:
        click.echo(json.dumps({"error": exc.code, "detail": exc.detail}),
                   err=True)
        sys.exit(1)


if __name__ == "__main__":
    entrypoint()
