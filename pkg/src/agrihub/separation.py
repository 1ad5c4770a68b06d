"""Time-series separation service.

Splits a contiguous machine recording into per-field work segments and
transfer (road) segments by overlaying known field boundaries, with an
offline GeoJSON boundary file as fallback when the store knows none.
Derived per-field series are written back deterministically, so reruns
overwrite rather than duplicate.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import vocab
from .access import AccessControl, Capability
from .errors import (
    AccessDeniedError,
    BoundariesUnavailableError,
    NotFoundError,
    ValidationError,
)
from .model import Iri, Triple
from .parsers.geojson import parse_geojson_boundaries
from .stores.geometry import FeatureGeometry, Polygon, point_in_polygon
from .stores.persistence import PersistentStores
from .stores.timeseries import SeriesRow

DEFAULT_GAP_SECONDS = 300
DEFAULT_MIN_ROWS = 10

SEPARATION_SERVICE_IRI = Iri("urn:agrihub:service:separation")


@dataclass(frozen=True)
class Segment:
    label: Optional[Iri]  # None marks a transfer segment
    rows: tuple[SeriesRow, ...]
    source_series: Iri

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if not self.rows:
            raise ValidationError("segment must hold at least one row")
        stamps = [r.timestamp for r in self.rows]
        if any(a >= b for a, b in zip(stamps, stamps[1:])):
            raise ValidationError("segment rows must be strictly ascending")

    @property
    def start_ms(self) -> int:
        return self.rows[0].timestamp

    @property
    def end_ms(self) -> int:
        return self.rows[-1].timestamp

    @property
    def label_text(self) -> str:
        return self.label.value if self.label else vocab.TRANSFER_LABEL


@dataclass(frozen=True)
class SeparationResult:
    source_series: Iri
    segments: tuple[Segment, ...]
    field_series: dict[Iri, Iri]  # field label -> derived series IRI
    stats: dict[str, int]  # label text -> row count
    boundaries: dict[Iri, FeatureGeometry]  # field label -> boundary used
    run_id: str
    gap_seconds: int
    min_rows: int


def assign_labels(rows: list[SeriesRow],
                  fields: list[FeatureGeometry]) -> list[tuple[SeriesRow,
                                                               Optional[Iri]]]:
    """Label each positioned row with its containing field, or transfer.

    Containment ties go to the polygon with the smaller bounding-box area,
    then the lexicographically smaller IRI (nested boundaries pick the
    inner field).
    """
    polygons = [f for f in fields if isinstance(f.shape, Polygon)]

    def rank(f: FeatureGeometry):
        area = (f.bbox[2] - f.bbox[0]) * (f.bbox[3] - f.bbox[1])
        return (area, f.instance_iri.value)

    labeled = []
    for row in rows:
        label = None
        if row.position is not None:
            containing = [f for f in polygons
                          if point_in_polygon(row.position, f.shape)]
            if containing:
                label = min(containing, key=rank).instance_iri
        labeled.append((row, label))
    return labeled


def segment_rows(labeled, source_series: Iri,
                 gap_seconds: int = DEFAULT_GAP_SECONDS,
                 min_rows: int = DEFAULT_MIN_ROWS) -> list[Segment]:
    """Three rules, applied in order: split maximal equal-label runs (a time
    gap splits even equal labels), relabel short field runs as transfer,
    merge adjacent transfer runs."""
    if not labeled:
        return []
    gap_ms = gap_seconds * 1000

    runs: list[list] = [[labeled[0]]]
    for previous, current in zip(labeled, labeled[1:]):
        same_label = current[1] == previous[1]
        gapped = current[0].timestamp - previous[0].timestamp > gap_ms
        if same_label and not gapped:
            runs[-1].append(current)
        else:
            runs.append([current])

    demoted: list[tuple[list, Optional[Iri]]] = []
    for run in runs:
        label = run[0][1]
        if label is not None and len(run) < min_rows:
            label = None
        demoted.append(([row for row, _ in run], label))

    merged: list[tuple[list, Optional[Iri]]] = []
    for rows, label in demoted:
        if merged and label is None and merged[-1][1] is None:
            merged[-1][0].extend(rows)
        else:
            merged.append((rows, label))

    return [Segment(label, tuple(rows), source_series)
            for rows, label in merged]


def _bbox_polygon(bbox) -> Polygon:
    min_lon, min_lat, max_lon, max_lat = bbox
    # a degenerate extent still needs a valid query polygon
    pad = 1e-9
    if min_lon == max_lon:
        max_lon += pad
    if min_lat == max_lat:
        max_lat += pad
    return Polygon(((min_lon, min_lat), (max_lon, min_lat),
                    (max_lon, max_lat), (min_lon, max_lat),
                    (min_lon, min_lat)))


class SeparationService:
    def __init__(self, stores: PersistentStores, access: AccessControl,
                 fallback_boundaries_path: Optional[Path] = None,
                 runs_dir: Optional[Path] = None):
        self._stores = stores
        self._access = access
        self._fallback_path = (
            Path(fallback_boundaries_path) if fallback_boundaries_path else None)
        self._runs_dir = Path(runs_dir) if runs_dir else None
        if self._runs_dir:
            self._runs_dir.mkdir(parents=True, exist_ok=True)

    # -- boundary collection ------------------------------------------------------

    def _field_instances(self) -> set[Iri]:
        fields = set()
        for graph in self._stores.graph.graphs():
            for t in self._stores.graph.graph_triples(graph):
                if t.predicate == vocab.TYPE and t.object == vocab.FIELD_CLASS:
                    fields.add(t.subject)
        return fields

    def collect_boundaries(self, query_bbox, token) -> list[FeatureGeometry]:
        """Accessible stored field polygons in the bbox; falls back to the
        configured offline boundary file when the store has none."""
        query = _bbox_polygon(query_bbox)
        field_iris = self._field_instances()
        stored = [
            f for f in self._stores.spatial.query_intersects(query)
            if isinstance(f.shape, Polygon)
            and f.instance_iri in field_iris
            and self._access.check_access(token, Capability.READ_SPATIAL, f.graph)
        ]
        if stored:
            return stored
        if self._fallback_path is None:
            raise BoundariesUnavailableError(
                "no stored field boundaries intersect the trajectory and no "
                "fallback boundary file is configured")
        return self._load_fallback(query)

    def _load_fallback(self, query: Polygon) -> list[FeatureGeometry]:
        try:
            data = self._fallback_path.read_bytes()
        except OSError as exc:
            raise BoundariesUnavailableError(
                f"fallback boundary file unreadable: {exc}")
        parsed = parse_geojson_boundaries(data)
        self._stores.graph_insert(vocab.OSM_FALLBACK_GRAPH, parsed.triples)
        hits = []
        for geometry in parsed.geometries:
            bound = FeatureGeometry(geometry.instance_iri, geometry.shape,
                                    vocab.OSM_FALLBACK_GRAPH)
            self._stores.spatial_insert(bound)
            if isinstance(bound.shape, Polygon):
                from .stores.geometry import shapes_intersect
                if shapes_intersect(query, bound.shape):
                    hits.append(bound)
        return hits

    # -- the pipeline ------------------------------------------------------------

    def _series_graph(self, series_iri: Iri) -> Optional[Iri]:
        for graph in self._stores.graph.subject_graphs(series_iri):
            for t in self._stores.graph.graph_triples(graph):
                if t.subject == series_iri and t.predicate == vocab.TYPE:
                    return graph
        return None

    def run(self, timelog_iri: Iri, token,
            gap_seconds: int = DEFAULT_GAP_SECONDS,
            min_rows: int = DEFAULT_MIN_ROWS) -> SeparationResult:
        if not self._stores.ts.exists(timelog_iri):
            raise NotFoundError(f"unknown timelog series {timelog_iri}")
        if not self._access.check_access(token, Capability.RUN_SERVICE,
                                         SEPARATION_SERVICE_IRI):
            raise AccessDeniedError("token may not run the separation service")
        series_graph = self._series_graph(timelog_iri)
        if series_graph is not None and not self._access.check_access(
                token, Capability.READ_TIMESERIES, series_graph):
            raise AccessDeniedError(
                f"token may not read timelog {timelog_iri}")

        rows = self._stores.ts.full_range(timelog_iri)
        positioned = [r for r in rows if r.position is not None]
        boundaries: list[FeatureGeometry] = []
        if positioned:
            lons = [r.position[0] for r in positioned]
            lats = [r.position[1] for r in positioned]
            bbox = (min(lons), min(lats), max(lons), max(lats))
            boundaries = self.collect_boundaries(bbox, token)

        labeled = assign_labels(rows, boundaries)
        segments = segment_rows(labeled, timelog_iri, gap_seconds, min_rows)

        field_order: list[Iri] = []
        for seg in segments:
            if seg.label is not None and seg.label not in field_order:
                field_order.append(seg.label)

        field_series: dict[Iri, Iri] = {}
        for n, field_label in enumerate(field_order, start=1):
            derived = Iri(f"{timelog_iri.value}/field/{n}")
            derived_rows = [row for seg in segments if seg.label == field_label
                            for row in seg.rows]
            self._stores.ts_replace(derived, derived_rows)
            self._stores.graph_insert(vocab.DERIVED_GRAPH, [
                Triple(derived, vocab.TYPE, vocab.TIMELOG_CLASS),
                Triple(derived, vocab.DERIVED_FROM, timelog_iri),
                Triple(derived, vocab.ON_FIELD, field_label),
            ])
            field_series[field_label] = derived

        stats: dict[str, int] = {}
        for seg in segments:
            stats[seg.label_text] = stats.get(seg.label_text, 0) + len(seg.rows)

        boundary_map = {f.instance_iri: f for f in boundaries
                        if f.instance_iri in field_series}
        run_id = hashlib.sha256(
            f"{timelog_iri.value}|{gap_seconds}|{min_rows}".encode()
        ).hexdigest()[:12]
        result = SeparationResult(
            source_series=timelog_iri,
            segments=tuple(segments),
            field_series=field_series,
            stats=stats,
            boundaries=boundary_map,
            run_id=run_id,
            gap_seconds=gap_seconds,
            min_rows=min_rows,
        )
        self._persist_run(result)
        return result

    # -- export -------------------------------------------------------------------

    def _persist_run(self, result: SeparationResult) -> None:
        if self._runs_dir is None:
            return
        path = self._runs_dir / f"{result.run_id}.json"
        payload = {
            "runId": result.run_id,
            "sourceSeries": result.source_series.value,
            "stats": result.stats,
            "geojson": json.loads(export_segments_geojson(result)),
        }
        path.write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")

    def load_run(self, run_id: str) -> dict:
        if self._runs_dir is None or not run_id or not run_id.isalnum():
            raise NotFoundError(f"unknown separation run {run_id!r}")
        path = self._runs_dir / f"{run_id}.json"
        if not path.exists():
            raise NotFoundError(f"unknown separation run {run_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))


def export_segments_geojson(result: SeparationResult) -> bytes:
    """RFC 7946 FeatureCollection: field boundary polygons, then one point
    feature per positioned row, in segment order."""
    features = []
    for field_label in sorted(result.boundaries, key=lambda i: i.value):
        boundary = result.boundaries[field_label]
        features.append({
            "type": "Feature",
            "properties": {"role": "boundary", "field": field_label.value},
            "geometry": {
                "type": "Polygon",
                "coordinates": [[list(c) for c in boundary.shape.coords]],
            },
        })
    for seg in result.segments:
        for row in seg.rows:
            if row.position is None:
                continue
            properties = {"role": "record", "segment": seg.label_text,
                          "timestamp": row.timestamp}
            for prop, value in sorted(row.values.items(),
                                      key=lambda kv: kv[0].value):
                properties[prop.value] = float(value)
            features.append({
                "type": "Feature",
                "properties": properties,
                "geometry": {"type": "Point",
                             "coordinates": list(row.position)},
            })
    doc = {"type": "FeatureCollection", "features": features}
    return json.dumps(doc, sort_keys=True).encode("utf-8")
