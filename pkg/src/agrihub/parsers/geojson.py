"""GeoJSON boundary files: one Field instance per Polygon feature."""

from __future__ import annotations

import json

from .. import vocab
from ..builtin_formats import GEOJSON_FORMAT
from ..errors import ParseError, ValidationError
from ..model import Datatype, Iri, Literal, Triple, mint_iri
from ..stores.geometry import FeatureGeometry, Polygon
from .base import ParseOutput

BOUNDARY_CLASS = Iri(GEOJSON_FORMAT.value + "/BoundaryField")


def _exterior_ring(geometry: dict) -> Polygon:
    coords = geometry.get("coordinates")
    if not isinstance(coords, list) or not coords:
        raise ValidationError("polygon without coordinates")
    ring = []
    for pair in coords[0]:
        if not isinstance(pair, (list, tuple)) or len(pair) < 2:
            raise ValidationError("bad coordinate pair")
        ring.append((float(pair[0]), float(pair[1])))
    if ring and ring[0] != ring[-1]:
        ring.append(ring[0])
    return Polygon(tuple(ring))


def parse_geojson_boundaries(data: bytes,
                             namespace: Iri = vocab.INSTANCE_NS) -> ParseOutput:
    try:
        document = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"invalid JSON: {exc}")
    if not isinstance(document, dict) or document.get("type") != "FeatureCollection":
        raise ParseError("expected a GeoJSON FeatureCollection")
    features = document.get("features")
    if not isinstance(features, list):
        raise ParseError("FeatureCollection without a features list")

    out = ParseOutput()
    for index, feature in enumerate(features, start=1):
        if not isinstance(feature, dict):
            out.warnings.append(f"feature {index} is not an object, skipped")
            continue
        geometry = feature.get("geometry") or {}
        if not isinstance(geometry, dict) or geometry.get("type") != "Polygon":
            kind = geometry.get("type") if isinstance(geometry, dict) else None
            out.warnings.append(
                f"feature {index} has {kind or 'no'} geometry, skipped")
            continue
        properties = feature.get("properties")
        properties = properties if isinstance(properties, dict) else {}
        name = properties.get("name")
        local = str(feature.get("id") or name or f"boundary-{index}")
        try:
            ring = _exterior_ring(geometry)
        except (ValidationError, ValueError, TypeError) as exc:
            out.warnings.append(f"feature {index} invalid: {exc}")
            continue
        instance = mint_iri(namespace, local)
        out.triples.add(Triple(instance, vocab.TYPE, BOUNDARY_CLASS))
        out.triples.add(Triple(instance, vocab.TYPE, vocab.FIELD_CLASS))
        if isinstance(name, str) and name:
            out.triples.add(Triple(instance, vocab.LABEL, Literal(name)))
        out.triples.add(Triple(instance, vocab.HAS_GEOMETRY,
                               Literal(instance.value, Datatype.GEOMETRY)))
        out.geometries.append(FeatureGeometry(instance, ring))
    return out
