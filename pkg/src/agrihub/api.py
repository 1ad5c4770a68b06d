"""HTTP+JSON surface over the platform.

Every read endpoint enforces per-service grants; access-denied (403) is
always distinguishable from an empty result (200 with an empty body).
Errors use one body shape: ``{"error": <code>, "detail": <text>}``.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, File, Form, Query, Request, UploadFile
from fastapi.responses import JSONResponse

from .access import Capability, Grant
from .errors import (
    AccessDeniedError,
    AgrihubError,
    AmbiguousFormatError,
    BoundariesUnavailableError,
    ConflictError,
    MalformedIriError,
    NotFoundError,
    ParseError,
    PreconditionError,
    UnknownFormatError,
    ValidationError,
)
from .model import Datatype, Iri, Literal, Term
from .platform import Platform
from .separation import DEFAULT_GAP_SECONDS, DEFAULT_MIN_ROWS
from .stores.geometry import FeatureGeometry
from .stores.graph import TriplePattern, Variable
from .stores.persistence import shape_from_json, shape_to_json
from .wikinormia import Comment, definition_from_json, definition_to_json

_STATUS = {
    AccessDeniedError: 403,
    NotFoundError: 404,
    ConflictError: 409,
    ValidationError: 400,
    MalformedIriError: 400,
    ParseError: 400,
    UnknownFormatError: 400,
    AmbiguousFormatError: 400,
    PreconditionError: 400,
    BoundariesUnavailableError: 409,
}


def _error_response(exc: AgrihubError) -> JSONResponse:
    status = next((code for cls, code in _STATUS.items()
                   if isinstance(exc, cls)), 500)
    return JSONResponse(status_code=status,
                        content={"error": exc.code, "detail": exc.detail})


# -- term / row JSON codecs -----------------------------------------------------

def term_to_json(term: Term) -> dict:
    if isinstance(term, Iri):
        return {"type": "iri", "value": term.value}
    return {"type": "literal", "value": term.lexical,
            "datatype": term.datatype.value}


def pattern_term_from_json(obj) -> object:
    if not isinstance(obj, dict):
        raise ValidationError("pattern terms must be objects")
    if "var" in obj:
        return Variable(str(obj["var"]))
    if "iri" in obj:
        return Iri(str(obj["iri"]))
    if "literal" in obj:
        lit = obj["literal"]
        return Literal(str(lit.get("value", "")),
                       Datatype(lit.get("datatype", "string")))
    raise ValidationError("pattern term needs var, iri or literal")


def feature_to_json(feature: FeatureGeometry) -> dict:
    return {"instance": feature.instance_iri.value,
            "graph": feature.graph.value,
            "shape": shape_to_json(feature.shape)}


def row_to_json(row) -> dict:
    return {"timestamp": row.timestamp,
            "position": list(row.position) if row.position else None,
            "values": {iri.value: str(v) for iri, v in sorted(
                row.values.items(), key=lambda kv: kv[0].value)}}


def bearer_token(request: Request) -> Optional[str]:
    header = request.headers.get("authorization", "")
    if header.lower().startswith("bearer "):
        return header[7:].strip()
    return None


def create_app(platform: Platform) -> FastAPI:
    app = FastAPI(title="agrihub", version="0.1.0")

    @app.exception_handler(AgrihubError)
    async def handle_agrihub_error(request: Request, exc: AgrihubError):
        return _error_response(exc)

    # -- ingestion ---------------------------------------------------------

    @app.post("/files")
    async def upload_file(request: Request,
                          file: UploadFile = File(...),
                          formatIri: Optional[str] = Form(None)):
        data = await file.read()
        hint = Iri(formatIri) if formatIri else None
        receipt = platform.ingest_file(data, file.filename or "",
                                       format_hint=hint,
                                       token=bearer_token(request))
        return receipt.to_json()

    # -- vocabulary ----------------------------------------------------------

    @app.get("/formats")
    def list_formats(request: Request, status: Optional[str] = None):
        rows = platform.formats.list_formats(status)
        return [{"formatIri": iri.value, "label": label,
                 "status": st, "version": version}
                for iri, label, st, version in rows]

    @app.post("/formats")
    def import_format(request: Request, body: dict):
        definition = definition_from_json(body)
        iri = platform.formats.create_draft(definition)
        return {"formatIri": iri.value, "status": "draft"}

    @app.post("/formats/{iri:path}/finalize")
    def finalize_format(iri: str):
        version = platform.formats.finalize(Iri(iri))
        return {"formatIri": iri, "status": "final", "version": version}

    @app.post("/formats/{iri:path}/comments")
    def add_comment(iri: str, body: dict):
        comment = Comment(str(body.get("author", "")),
                          str(body.get("timestamp", "")),
                          str(body.get("body", "")))
        count = platform.formats.add_comment(Iri(iri), comment)
        return {"formatIri": iri, "comments": count}

    @app.get("/formats/{iri:path}")
    def get_format(iri: str, version: Optional[int] = None):
        definition = platform.formats.get_format(Iri(iri), version)
        return definition_to_json(definition)

    # -- queries ----------------------------------------------------------------

    @app.post("/query/graph")
    def query_graph(request: Request, body: dict):
        patterns = [
            TriplePattern(pattern_term_from_json(p.get("subject")),
                          pattern_term_from_json(p.get("predicate")),
                          pattern_term_from_json(p.get("object")))
            for p in body.get("patterns", [])
        ]
        if not patterns:
            raise ValidationError("at least one pattern required")
        graphs = [Iri(g) for g in body.get("graphs", [])] or None
        bindings = platform.query_graph(
            bearer_token(request), patterns, graphs,
            expand_same_as=bool(body.get("expandSameAs", False)))
        return {"bindings": [
            {name: term_to_json(value) for name, value in binding.items()}
            for binding in bindings]}

    @app.post("/query/spatial")
    def query_spatial(request: Request, body: dict):
        shape_obj = body.get("shape")
        if not isinstance(shape_obj, dict):
            raise ValidationError("spatial query needs a GeoJSON shape")
        try:
            shape = shape_from_json(shape_obj)
        except (ValueError, TypeError, KeyError, IndexError) as exc:
            raise ValidationError(f"bad shape: {exc}")
        meters = body.get("meters")
        features = platform.query_spatial(
            bearer_token(request), shape,
            mode=body.get("mode", "intersects"),
            meters=float(meters) if meters is not None else None)
        return {"features": [feature_to_json(f) for f in features]}

    @app.get("/series/{iri:path}/range")
    def series_range(request: Request, iri: str,
                     from_ms: Optional[int] = Query(None, alias="from"),
                     to_ms: Optional[int] = Query(None, alias="to"),
                     columns: Optional[str] = None):
        column_iris = None
        if columns:
            column_iris = [Iri(c) for c in columns.split(",") if c]
        rows = platform.query_timeseries(
            bearer_token(request), Iri(iri),
            from_ms if from_ms is not None else 0,
            to_ms if to_ms is not None else 2**62,
            column_iris)
        return {"rows": [row_to_json(r) for r in rows]}

    # -- services and grants -----------------------------------------------------

    @app.post("/services")
    def create_service(request: Request, body: dict):
        service_id = str(body.get("serviceId", ""))
        token = platform.create_service(bearer_token(request), service_id)
        return {"serviceId": service_id, "token": token}

    @app.put("/services/{service_id}/grants")
    def put_grants(request: Request, service_id: str,
               body: list[dict]):
        grants = [Grant(str(g["graphPattern"]), Capability(g["capability"]))
                  for g in body]
        account = platform.manage_grants(bearer_token(request), service_id,
                                         grants)
        return {"serviceId": account.service_id,
                "grants": [{"graphPattern": g.graph_pattern,
                            "capability": g.capability.value}
                           for g in account.grants]}

    # -- linking -------------------------------------------------------------------

    @app.post("/links/dedup")
    def dedup(request: Request, body: dict):
        pairs = platform.run_dedup(
            bearer_token(request),
            Iri(str(body.get("graphA", ""))),
            Iri(str(body.get("graphB", ""))),
            threshold=body.get("threshold"))
        return {"pairs": [{"a": p.a.value, "b": p.b.value, "iou": p.iou}
                          for p in pairs]}

    @app.post("/annotations")
    def annotate(request: Request, body: dict):
        value_obj = body.get("value")
        if isinstance(value_obj, dict) and value_obj.get("type") == "iri":
            value = Iri(str(value_obj["value"]))
        elif isinstance(value_obj, dict):
            value = Literal(str(value_obj.get("value", "")),
                            Datatype(value_obj.get("datatype", "string")))
        else:
            raise ValidationError("annotation value must be a term object")
        platform.annotate(bearer_token(request),
                          Iri(str(body.get("instance", ""))),
                          Iri(str(body.get("predicate", ""))), value)
        return {"status": "ok"}

    # -- separation ------------------------------------------------------------------

    @app.post("/services/separation/run")
    def run_separation(request: Request, body: dict):
        timelog = Iri(str(body.get("timelogIri", "")))
        result = platform.run_separation(
            bearer_token(request), timelog,
            gap_seconds=int(body.get("gapSeconds", DEFAULT_GAP_SECONDS)),
            min_rows=int(body.get("minRows", DEFAULT_MIN_ROWS)))
        return {
            "runId": result.run_id,
            "sourceSeries": result.source_series.value,
            "stats": result.stats,
            "segments": [
                {"label": seg.label_text, "rows": len(seg.rows),
                 "startMs": seg.start_ms, "endMs": seg.end_ms}
                for seg in result.segments],
            "fieldSeries": {f.value: s.value
                            for f, s in result.field_series.items()},
        }

    @app.get("/separation/{run_id}/geojson")
    def separation_geojson(request: Request, run_id: str):
        payload = platform.separation_geojson(bearer_token(request), run_id)
        return payload["geojson"]

    @app.get("/separation/{run_id}")
    def separation_run(request: Request, run_id: str):
        payload = platform.separation_geojson(bearer_token(request), run_id)
        return {"runId": payload["runId"],
                "sourceSeries": payload["sourceSeries"],
                "stats": payload["stats"]}

    return app
