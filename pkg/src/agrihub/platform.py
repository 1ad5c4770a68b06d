"""Platform facade: configuration, store wiring, the ingestion transaction,
and the access-checked query surface the HTTP layer and CLI both call.

Reads run concurrently; every mutation (ingest, grants, links, annotation,
separation writes, vocabulary changes) serializes through one writer lock,
so no query ever observes a partially ingested file.
"""

from __future__ import annotations

import json
import threading
import uuid
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Union

from . import vocab
from .access import AccessControl, Capability, Grant
from .builtin_formats import install_builtins
from .errors import AccessDeniedError, NotFoundError, ValidationError
from .linker import Linker
from .model import Iri, Literal, Term
from .parsers.base import ParserRegistry
from .parsers.registrations import build_parser_registry
from .separation import SeparationService
from .stores.geometry import FeatureGeometry, Shape
from .stores.graph import TriplePattern
from .stores.persistence import PersistentStores
from .wikinormia import FormatRegistry


@dataclass(frozen=True)
class PlatformConfig:
    admin_token: str
    data_dir: Optional[Path] = None  # None keeps everything in memory
    fallback_boundaries_path: Optional[Path] = None
    auto_dedup: bool = False
    dedup_threshold: float = 0.7
    instance_namespace: str = vocab.INSTANCE_NS.value

    @classmethod
    def from_file(cls, path) -> "PlatformConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if "adminToken" not in raw:
            raise ValidationError("config needs an adminToken")
        base = Path(path).resolve().parent

        def resolve(key):
            value = raw.get(key)
            if value is None:
                return None
            p = Path(value)
            return p if p.is_absolute() else base / p

        return cls(
            admin_token=raw["adminToken"],
            data_dir=resolve("dataDir"),
            fallback_boundaries_path=resolve("fallbackBoundariesPath"),
            auto_dedup=bool(raw.get("autoDedup", False)),
            dedup_threshold=float(raw.get("dedupThreshold", 0.7)),
            instance_namespace=raw.get("instanceNamespace",
                                       vocab.INSTANCE_NS.value),
        )


@dataclass(frozen=True)
class IngestReceipt:
    file_iri: Iri  # doubles as the named graph of the file
    format_iri: Iri
    counts: dict
    warnings: tuple[str, ...] = ()
    row_errors: tuple[str, ...] = ()
    linked_pairs: int = 0

    def to_json(self) -> dict:
        return {
            "fileIri": self.file_iri.value,
            "formatIri": self.format_iri.value,
            "counts": dict(self.counts),
            "warnings": list(self.warnings),
            "rowErrors": list(self.row_errors),
            "linkedPairs": self.linked_pairs,
        }


class _RWLock:
    """Many readers, one writer; writes block until readers drain."""

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writing = False

    @contextmanager
    def read(self):
        with self._cond:
            while self._writing:
                self._cond.wait()
            self._readers += 1
        try:
            yield
        finally:
            with self._cond:
                self._readers -= 1
                self._cond.notify_all()

    @contextmanager
    def write(self):
        with self._cond:
            while self._writing or self._readers:
                self._cond.wait()
            self._writing = True
        try:
            yield
        finally:
            with self._cond:
                self._writing = False
                self._cond.notify_all()


class Platform:
    def __init__(self, config: PlatformConfig):
        self.config = config
        data_dir = Path(config.data_dir) if config.data_dir else None
        if data_dir:
            data_dir.mkdir(parents=True, exist_ok=True)
        self.stores = PersistentStores(data_dir)
        self.formats = FormatRegistry(
            stores=self.stores,
            journal_path=(data_dir / "wikinormia.journal") if data_dir else None)
        install_builtins(self.formats)
        self.formats.replay_journal()
        self.parsers: ParserRegistry = build_parser_registry(self.formats)
        self.access = AccessControl(
            config.admin_token,
            (data_dir / "services.json") if data_dir else None)
        self.linker = Linker(self.stores, threshold=config.dedup_threshold)
        self.separation = SeparationService(
            self.stores, self.access,
            fallback_boundaries_path=config.fallback_boundaries_path,
            runs_dir=(data_dir / "runs") if data_dir else None)
        self._lock = _RWLock()

    # -- ingestion ---------------------------------------------------------------

    def ingest_file(self, data: bytes, filename_hint: str,
                    format_hint: Optional[Iri] = None,
                    token: Optional[str] = None) -> IngestReceipt:
        """Parse an upload and land its output in all three stores atomically."""
        if not self.access.is_admin(token):
            raise AccessDeniedError("ingestion requires the admin token")
        format_iri = format_hint or self.parsers.detect_format(data, filename_hint)
        file_id = uuid.uuid4().hex[:12]
        graph = Iri(vocab.FILE_GRAPH_PREFIX + file_id)
        namespace = Iri(f"{self.config.instance_namespace}{file_id}/")

        # parsing is pure; only the store writes need the writer lock
        output = self.parsers.parse(format_iri, data, namespace)

        with self._lock.write():
            triple_count = self.stores.graph_insert(graph, output.triples)
            for geometry in output.geometries:
                self.stores.spatial_insert(replace(geometry, graph=graph))
            row_count = 0
            for series_iri, rows in output.series:
                row_count += self.stores.ts_append(series_iri, rows)

        linked = 0
        if self.config.auto_dedup:
            with self._lock.write():
                linked = sum(1 for _ in self.linker.run_dedup(graph))

        return IngestReceipt(
            file_iri=graph,
            format_iri=format_iri,
            counts={"triples": triple_count,
                    "geometries": len(output.geometries),
                    "seriesRows": row_count},
            warnings=tuple(output.warnings),
            row_errors=tuple(output.row_errors),
            linked_pairs=linked,
        )

    # -- queries -------------------------------------------------------------------

    def _readable_graphs(self, token, requested: Optional[list[Iri]],
                         capability: Capability) -> list[Iri]:
        graphs = requested if requested else self.stores.graph.graphs()
        readable = [g for g in graphs
                    if self.access.check_access(token, capability, g)]
        if not readable:
            raise AccessDeniedError("token may not read any of the graphs")
        return readable

    def query_graph(self, token, patterns: list[TriplePattern],
                    graphs: Optional[list[Iri]] = None,
                    expand_same_as: bool = False) -> list[dict]:
        with self._lock.read():
            readable = self._readable_graphs(token, graphs,
                                             Capability.READ_GRAPH)
            variants = [patterns]
            if expand_same_as:
                variants = self._expand_same_as(patterns)
            merged: dict[tuple, dict] = {}
            for variant in variants:
                for binding in self.stores.graph.bgp(variant, readable):
                    key = tuple(sorted(
                        (k, _term_sort_key(v)) for k, v in binding.items()))
                    merged.setdefault(key, binding)
            return [merged[k] for k in sorted(merged)]

    def _expand_same_as(self, patterns):
        """Expand constant subject/object IRIs to their equivalence classes."""
        variants = [[]]
        for pattern in patterns:
            subject_options = self._equivalents_of(pattern.subject)
            object_options = self._equivalents_of(pattern.object)
            grown = []
            for prefix in variants:
                for s in subject_options:
                    for o in object_options:
                        grown.append(prefix + [
                            TriplePattern(s, pattern.predicate, o)])
            variants = grown
        return variants

    def _equivalents_of(self, term):
        if isinstance(term, Iri):
            return sorted(self.linker.resolve_equivalents(term),
                          key=lambda i: i.value)
        return [term]

    def query_spatial(self, token, shape: Shape, mode: str = "intersects",
                      meters: Optional[float] = None) -> list[FeatureGeometry]:
        if mode not in ("intersects", "within-distance"):
            raise ValidationError(f"unknown spatial query mode {mode!r}")
        with self._lock.read():
            if mode == "intersects":
                hits = self.stores.spatial.query_intersects(shape)
            else:
                if meters is None:
                    raise ValidationError(
                        "within-distance queries need a meters parameter")
                from .stores.geometry import Point
                if not isinstance(shape, Point):
                    raise ValidationError(
                        "within-distance queries take a point")
                hits = self.stores.spatial.query_within_distance(
                    shape.coord, meters)
            return [f for f in hits if self.access.check_access(
                token, Capability.READ_SPATIAL, f.graph)]

    def series_graph(self, series_iri: Iri) -> Optional[Iri]:
        for graph in self.stores.graph.subject_graphs(series_iri):
            for t in self.stores.graph.graph_triples(graph):
                if t.subject == series_iri and t.predicate == vocab.TYPE:
                    return graph
        return None

    def query_timeseries(self, token, series_iri: Iri, from_ms: int,
                         to_ms: int, columns: Optional[list[Iri]] = None):
        with self._lock.read():
            if not self.stores.ts.exists(series_iri):
                raise NotFoundError(f"unknown series {series_iri}")
            graph = self.series_graph(series_iri)
            if graph is None or not self.access.check_access(
                    token, Capability.READ_TIMESERIES, graph):
                raise AccessDeniedError(
                    f"token may not read series {series_iri}")
            return self.stores.ts.range(series_iri, from_ms, to_ms, columns)

    # -- linking and annotation ---------------------------------------------------

    def run_dedup(self, token, graph_a: Iri, graph_b: Iri,
                  threshold: Optional[float] = None):
        if not self.access.is_admin(token):
            raise AccessDeniedError("dedup requires the admin token")
        with self._lock.write():
            pairs = self.linker.find_duplicates(graph_a, graph_b, threshold)
            self.linker.link_same_as(pairs)
            return pairs

    def annotate(self, token, instance_iri: Iri, predicate: Iri,
                 value: Union[Iri, Literal]) -> None:
        if not self.access.is_admin(token):
            raise AccessDeniedError("annotation requires the admin token")
        with self._lock.write():
            self.linker.annotate(instance_iri, predicate, value)

    # -- separation ---------------------------------------------------------------

    def run_separation(self, token, timelog_iri: Iri,
                       gap_seconds: int = 300, min_rows: int = 10):
        with self._lock.write():
            return self.separation.run(timelog_iri, token, gap_seconds,
                                       min_rows)

    def separation_geojson(self, token, run_id: str) -> dict:
        if not self.access.check_access(
                token, Capability.RUN_SERVICE,
                Iri("urn:agrihub:service:separation")):
            raise AccessDeniedError("token may not read separation runs")
        with self._lock.read():
            return self.separation.load_run(run_id)

    # -- vocabulary and services -----------------------------------------------------

    def manage_grants(self, token, service_id: str,
                      grants: list[Grant]):
        if not self.access.is_admin(token):
            raise AccessDeniedError("grant management requires the admin token")
        with self._lock.write():
            return self.access.manage_grants(service_id, grants)

    def create_service(self, token, service_id: str) -> str:
        if not self.access.is_admin(token):
            raise AccessDeniedError("service creation requires the admin token")
        with self._lock.write():
            return self.access.create_service(service_id)


def _term_sort_key(term: Term) -> str:
    from .model import term_text

    return term_text(term)
