"""Post-ingestion linking: spatial duplicate detection across source graphs,
SameAs bookkeeping, equivalence resolution, and instance annotation.

Links never merge data; they are ordinary triples in the system links graph,
so provenance per source graph stays intact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from . import vocab
from .errors import NotFoundError, ValidationError
from .model import Iri, Literal, Triple
from .stores.geometry import Polygon, bbox_intersects, grid_iou
from .stores.persistence import PersistentStores

DEFAULT_IOU_THRESHOLD = 0.7


@dataclass(frozen=True)
class DuplicatePair:
    a: Iri
    b: Iri
    iou: float


class Linker:
    def __init__(self, stores: PersistentStores,
                 threshold: float = DEFAULT_IOU_THRESHOLD,
                 grid_resolution: int = 256):
        self._stores = stores
        self.threshold = threshold
        self._resolution = grid_resolution

    # -- duplicate detection ---------------------------------------------------

    def _field_polygons(self, graph: Iri) -> list:
        """Field-typed instances of one graph that carry polygon shapes."""
        typed = {t.subject for t in self._stores.graph.graph_triples(graph)
                 if t.predicate == vocab.TYPE and t.object == vocab.FIELD_CLASS}
        features = []
        for feature in self._stores.spatial.all_features():
            if feature.graph == graph and feature.instance_iri in typed \
                    and isinstance(feature.shape, Polygon):
                features.append(feature)
        return features

    def find_duplicates(self, graph_a: Iri, graph_b: Iri,
                        threshold: Optional[float] = None) -> list[DuplicatePair]:
        """Greedy one-to-one matching of overlapping field polygons.

        Candidates are ranked by descending IoU (ties by IRI); each instance
        is matched at most once, so one sloppy boundary cannot merge several
        distinct fields.
        """
        threshold = self.threshold if threshold is None else threshold
        if not (0 < threshold <= 1):
            raise ValidationError("threshold must be in (0, 1]")
        candidates = []
        for fa in self._field_polygons(graph_a):
            for fb in self._field_polygons(graph_b):
                if fa.instance_iri == fb.instance_iri:
                    continue
                if not bbox_intersects(fa.bbox, fb.bbox):
                    continue
                result = grid_iou(fa.shape, fb.shape, self._resolution)
                if not result.degenerate and result.iou >= threshold:
                    candidates.append((fa.instance_iri, fb.instance_iri,
                                       result.iou))
        candidates.sort(key=lambda c: (-c[2], c[0].value, c[1].value))
        matched: set[Iri] = set()
        pairs = []
        for a, b, iou in candidates:
            if a in matched or b in matched:
                continue
            matched.update((a, b))
            pairs.append(DuplicatePair(a, b, iou))
        return pairs

    # -- links -------------------------------------------------------------------

    def link_same_as(self, pairs: Iterable[DuplicatePair]) -> int:
        """Store both directed sameAs triples per pair; idempotent."""
        triples = []
        for pair in pairs:
            if pair.a == pair.b:
                raise ValidationError("sameAs link must join distinct IRIs")
            triples.append(Triple(pair.a, vocab.SAME_AS, pair.b))
            triples.append(Triple(pair.b, vocab.SAME_AS, pair.a))
        return self._stores.graph_insert(vocab.LINKS_GRAPH, triples)

    def resolve_equivalents(self, iri: Iri) -> set[Iri]:
        """Reflexive-symmetric-transitive closure of sameAs around an IRI."""
        links = self._stores.graph.graph_triples(vocab.LINKS_GRAPH)
        neighbours: dict[Iri, set[Iri]] = {}
        for t in links:
            if t.predicate == vocab.SAME_AS and isinstance(t.object, Iri):
                neighbours.setdefault(t.subject, set()).add(t.object)
                neighbours.setdefault(t.object, set()).add(t.subject)
        seen = {iri}
        frontier = [iri]
        while frontier:
            current = frontier.pop()
            for nxt in neighbours.get(current, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return seen

    # -- annotation ----------------------------------------------------------------

    def annotate(self, instance_iri: Iri, predicate: Iri,
                 value: Union[Iri, Literal]) -> None:
        """Attach an extra fact to a known instance in the annotations graph."""
        if not self._has_typing_triple(instance_iri):
            raise NotFoundError(f"unknown instance {instance_iri}")
        self._stores.graph_insert(
            vocab.ANNOTATIONS_GRAPH, [Triple(instance_iri, predicate, value)])

    def _has_typing_triple(self, instance_iri: Iri) -> bool:
        for graph in self._stores.graph.subject_graphs(instance_iri):
            for t in self._stores.graph.graph_triples(graph):
                if t.subject == instance_iri and t.predicate == vocab.TYPE:
                    return True
        return False

    def run_dedup(self, new_graph: Iri,
                  threshold: Optional[float] = None) -> list[DuplicatePair]:
        """Match a freshly ingested graph against every other graph."""
        all_pairs = []
        for other in self._stores.graph.graphs():
            if other == new_graph or other == vocab.LINKS_GRAPH \
                    or other == vocab.ANNOTATIONS_GRAPH:
                continue
            pairs = self.find_duplicates(new_graph, other, threshold)
            if pairs:
                self.link_same_as(pairs)
                all_pairs.extend(pairs)
        return all_pairs
