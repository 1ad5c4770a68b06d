"""Schema-driven CSV parsing generated from a finalized vocabulary.

The format definition names, per property, the CSV column it is read from;
one class per format may carry such annotations. Bad rows are collected as
row errors and skipped so the rest of the file still loads.
"""

from __future__ import annotations

import csv
import io
import re

from .. import vocab
from ..errors import MalformedIriError, ParseError, PreconditionError, ValidationError
from ..model import Datatype, Iri, Literal, Triple, mint_iri
from ..stores.geometry import FeatureGeometry, LineString, Point, Polygon
from ..wikinormia import Cardinality, FormatDefinition
from .base import ParseOutput

_WKT_BODY = re.compile(r"^\s*(POINT|LINESTRING|POLYGON)\s*\((.*)\)\s*$",
                       re.IGNORECASE | re.DOTALL)


def _coords(text: str):
    pairs = []
    for chunk in text.split(","):
        parts = chunk.split()
        if len(parts) != 2:
            raise ValidationError(f"bad WKT coordinate {chunk.strip()!r}")
        try:
            pairs.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ValidationError(f"bad WKT coordinate {chunk.strip()!r}")
    return pairs


def parse_wkt(text: str):
    """Minimal WKT reader: POINT, LINESTRING, POLYGON (exterior ring only)."""
    match = _WKT_BODY.match(text or "")
    if not match:
        raise ValidationError(f"unparseable WKT: {text[:40]!r}")
    kind, body = match.group(1).upper(), match.group(2)
    if kind == "POINT":
        pair = _coords(body)
        if len(pair) != 1:
            raise ValidationError("POINT takes exactly one coordinate")
        return Point(pair[0])
    if kind == "LINESTRING":
        return LineString(tuple(_coords(body)))
    # POLYGON ((...), (holes ignored))
    rings = re.findall(r"\(([^()]*)\)", body)
    if not rings:
        raise ValidationError("POLYGON needs a parenthesized ring")
    ring = _coords(rings[0])
    if ring and ring[0] != ring[-1]:
        ring.append(ring[0])
    return Polygon(tuple(ring))


def _csv_class(definition: FormatDefinition):
    annotated = [c for c in definition.classes
                 if any(p.csv_column for p in c.properties)]
    if len(annotated) != 1:
        raise PreconditionError(
            f"format {definition.format_iri} must have exactly one class with "
            f"csv column annotations, found {len(annotated)}")
    return annotated[0]


def _convert(prop, cell: str):
    if isinstance(prop.range, Iri):
        return Iri(cell)  # class-ranged column holds an absolute IRI
    if prop.range is Datatype.GEOMETRY:
        return parse_wkt(cell)
    return Literal(cell, prop.range)


def parse_csv_with_schema(definition: FormatDefinition, data: bytes,
                          namespace: Iri = vocab.INSTANCE_NS) -> ParseOutput:
    """One instance per data row; cells converted per the property ranges."""
    if definition.status != "final":
        raise PreconditionError("schema-driven parsing needs a final format")
    cls = _csv_class(definition)
    columns = {p.csv_column: p for p in cls.properties if p.csv_column}
    id_property = next(
        (p for p in cls.properties if p.csv_column and p.label == "id"), None)

    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"CSV is not valid UTF-8: {exc}")
    try:
        reader = csv.reader(io.StringIO(text))
        rows = list(reader)
    except csv.Error as exc:
        raise ParseError(f"CSV structure error: {exc}")
    if not rows:
        raise ParseError("CSV has no header row")
    header = [h.strip() for h in rows[0]]

    missing = [p.csv_column for p in cls.properties
               if p.csv_column and p.cardinality is Cardinality.REQUIRED_ONE
               and p.csv_column not in header]
    if missing:
        raise ParseError(
            "required column(s) missing from header: " + ", ".join(sorted(missing)))

    out = ParseOutput()
    for ordinal, cells in enumerate(rows[1:], start=1):
        if not any(cell.strip() for cell in cells):
            continue
        record = dict(zip(header, cells))
        local = None
        if id_property is not None:
            local = record.get(id_property.csv_column, "").strip()
        if not local:
            local = f"row-{ordinal}"
        instance = mint_iri(namespace, local)

        triples, geometries = [], []
        try:
            for column, prop in columns.items():
                cell = record.get(column, "").strip()
                if not cell:
                    if prop.cardinality is Cardinality.REQUIRED_ONE:
                        raise ValidationError(
                            f"empty required column {column}")
                    continue
                value = _convert(prop, cell)
                if prop.range is Datatype.GEOMETRY:
                    geometries.append(FeatureGeometry(instance, value))
                    triples.append(Triple(instance, prop.property_iri,
                                          Literal(instance.value,
                                                  Datatype.GEOMETRY)))
                else:
                    triples.append(Triple(instance, prop.property_iri, value))
        except (ValidationError, MalformedIriError) as exc:
            out.row_errors.append(f"row {ordinal}: {exc}")
            continue

        out.triples.add(Triple(instance, vocab.TYPE, cls.class_iri))
        if cls.parent_class is not None:
            out.triples.add(Triple(instance, vocab.TYPE, cls.parent_class))
        out.triples.update(triples)
        out.geometries.extend(geometries)
    return out
