"""Durable wrapper around the three in-process stores.

Every mutation is journaled line-by-line under the data directory:

    data/graph.journal        "+ <graph-iri> " + triple line
    data/spatial.journal      one JSON object per feature per line
    data/ts/<series-hash>.journal   header line, then one JSON row per line

Replaying any whole-line prefix of a journal reproduces exactly the state
after those mutations; an unparseable line aborts the restore, naming the
file and line. With ``data_dir=None`` the stores are ephemeral.
"""

from __future__ import annotations

import hashlib
import json
import os
from decimal import Decimal
from pathlib import Path
from typing import Iterable, Optional

from ..errors import JournalCorruptError, MalformedIriError, ParseError
from ..model import Iri, Triple, parse_triple_line, triple_line
from .geometry import FeatureGeometry, LineString, Point, Polygon
from .graph import GraphStore
from .spatial import SpatialStore
from .timeseries import SeriesRow, TimeSeriesStore

_SHAPE_TYPES = {"Point": Point, "LineString": LineString, "Polygon": Polygon}


def shape_to_json(shape) -> dict:
    if isinstance(shape, Point):
        return {"type": "Point", "coordinates": list(shape.coord)}
    if isinstance(shape, LineString):
        return {"type": "LineString", "coordinates": [list(c) for c in shape.coords]}
    return {"type": "Polygon", "coordinates": [[list(c) for c in shape.coords]]}


def shape_from_json(obj: dict):
    kind = obj.get("type")
    coords = obj.get("coordinates")
    if kind == "Point":
        return Point((float(coords[0]), float(coords[1])))
    if kind == "LineString":
        return LineString(tuple((float(x), float(y)) for x, y in coords))
    if kind == "Polygon":
        return Polygon(tuple((float(x), float(y)) for x, y in coords[0]))
    raise ValueError(f"unsupported shape type {kind!r}")


def feature_to_json(f: FeatureGeometry) -> dict:
    return {"instance": f.instance_iri.value, "graph": f.graph.value,
            "shape": shape_to_json(f.shape)}


def feature_from_json(obj: dict) -> FeatureGeometry:
    return FeatureGeometry(instance_iri=Iri(obj["instance"]),
                           graph=Iri(obj["graph"]),
                           shape=shape_from_json(obj["shape"]))


def row_to_json(row: SeriesRow) -> dict:
    return {"t": row.timestamp,
            "pos": list(row.position) if row.position else None,
            "v": {iri.value: str(v) for iri, v in sorted(
                row.values.items(), key=lambda kv: kv[0].value)}}


def row_from_json(obj: dict) -> SeriesRow:
    pos = obj.get("pos")
    return SeriesRow(
        timestamp=int(obj["t"]),
        position=(float(pos[0]), float(pos[1])) if pos else None,
        values={Iri(k): Decimal(v) for k, v in obj.get("v", {}).items()})


def series_file_name(series_iri: Iri) -> str:
    return hashlib.sha256(series_iri.value.encode("utf-8")).hexdigest()[:16] + ".journal"


class PersistentStores:
    """GraphStore + SpatialStore + TimeSeriesStore with a mutation journal."""

    def __init__(self, data_dir: Optional[Path] = None):
        self.graph = GraphStore()
        self.spatial = SpatialStore()
        self.ts = TimeSeriesStore()
        self._dir = Path(data_dir) if data_dir else None
        if self._dir:
            (self._dir / "ts").mkdir(parents=True, exist_ok=True)
            self._restore()

    # -- journaled mutations --------------------------------------------------

    def graph_insert(self, graph: Iri, triples: Iterable[Triple]) -> int:
        added = self._graph_insert_new(graph, triples)
        if added and self._dir:
            with open(self._dir / "graph.journal", "a", encoding="utf-8") as fh:
                for t in added:
                    fh.write(f"+ <{graph.value}> {triple_line(t)}\n")
        return len(added)

    def _graph_insert_new(self, graph: Iri, triples: Iterable[Triple]) -> list[Triple]:
        added = []
        for t in triples:
            if self.graph.insert(graph, [t]):
                added.append(t)
        return added

    def spatial_insert(self, feature: FeatureGeometry) -> None:
        self.spatial.insert(feature)
        if self._dir:
            with open(self._dir / "spatial.journal", "a", encoding="utf-8") as fh:
                fh.write(json.dumps(feature_to_json(feature), sort_keys=True) + "\n")

    def ts_append(self, series_iri: Iri, rows: list[SeriesRow]) -> int:
        count = self.ts.append(series_iri, rows)
        if self._dir:
            path = self._dir / "ts" / series_file_name(series_iri)
            fresh = not path.exists()
            with open(path, "a", encoding="utf-8") as fh:
                if fresh:
                    fh.write(json.dumps({"series": series_iri.value}) + "\n")
                for row in rows:
                    fh.write(json.dumps(row_to_json(row), sort_keys=True) + "\n")
        return count

    def ts_replace(self, series_iri: Iri, rows: list[SeriesRow]) -> int:
        count = self.ts.replace(series_iri, rows)
        if self._dir:
            path = self._dir / "ts" / series_file_name(series_iri)
            tmp = path.with_suffix(".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                fh.write(json.dumps({"series": series_iri.value}) + "\n")
                for row in rows:
                    fh.write(json.dumps(row_to_json(row), sort_keys=True) + "\n")
            os.replace(tmp, path)
        return count

    # -- restore ----------------------------------------------------------------

    def _restore(self) -> None:
        self._restore_graph(self._dir / "graph.journal")
        self._restore_spatial(self._dir / "spatial.journal")
        ts_dir = self._dir / "ts"
        for path in sorted(ts_dir.glob("*.journal")):
            self._restore_series(path)

    def _restore_graph(self, path: Path) -> None:
        if not path.exists():
            return
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                if not line.startswith("+ <"):
                    raise JournalCorruptError(path, line_no)
                end = line.find("> ", 2)
                if end < 0:
                    raise JournalCorruptError(path, line_no)
                try:
                    graph = Iri(line[3:end])
                    triple = parse_triple_line(line[end + 2:])
                except (MalformedIriError, ParseError):
                    raise JournalCorruptError(path, line_no)
                self.graph.insert(graph, [triple])

    def _restore_spatial(self, path: Path) -> None:
        if not path.exists():
            return
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    self.spatial.insert(feature_from_json(json.loads(line)))
                except Exception:
                    raise JournalCorruptError(path, line_no)

    def _restore_series(self, path: Path) -> None:
        series_iri = None
        rows: list[SeriesRow] = []
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    if line_no == 1:
                        series_iri = Iri(obj["series"])
                    else:
                        rows.append(row_from_json(obj))
                except Exception:
                    raise JournalCorruptError(path, line_no)
        if series_iri is not None:
            self.ts.append(series_iri, rows)
