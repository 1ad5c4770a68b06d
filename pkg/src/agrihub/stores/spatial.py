"""Spatial index over feature geometries.

Features are keyed by (graph, instance IRI); re-inserting the same key
replaces the prior shape (last write wins). Queries prefilter through a
bounding-volume tree rebuilt lazily after mutations, then apply the exact
geometry tests from :mod:`agrihub.stores.geometry`.
"""

from __future__ import annotations

from ..errors import ValidationError
from ..model import Iri
from .geometry import (
    FeatureGeometry,
    Shape,
    bbox_intersects,
    bbox_of,
    distance_to_shape_m,
    shapes_intersect,
)

_LEAF_SIZE = 8


class _Node:
    __slots__ = ("bbox", "children", "items")

    def __init__(self, bbox, children=None, items=None):
        self.bbox = bbox
        self.children = children
        self.items = items


def _merge(a, b):
    return (min(a[0], b[0]), min(a[1], b[1]), max(a[2], b[2]), max(a[3], b[3]))


def _build(items: list[FeatureGeometry]) -> _Node:
    bbox = items[0].bbox
    for f in items[1:]:
        bbox = _merge(bbox, f.bbox)
    if len(items) <= _LEAF_SIZE:
        return _Node(bbox, items=items)
    # split on the wider axis at the median of bbox centers
    axis = 0 if (bbox[2] - bbox[0]) >= (bbox[3] - bbox[1]) else 1
    items = sorted(items, key=lambda f: (f.bbox[axis] + f.bbox[axis + 2],
                                         f.instance_iri.value))
    mid = len(items) // 2
    return _Node(bbox, children=[_build(items[:mid]), _build(items[mid:])])


class SpatialStore:
    def __init__(self):
        self._features: dict[tuple[Iri, Iri], FeatureGeometry] = {}
        self._root: _Node | None = None
        self._dirty = False

    def insert(self, feature: FeatureGeometry) -> None:
        if feature.graph is None:
            raise ValidationError("feature must be bound to a named graph")
        self._features[(feature.graph, feature.instance_iri)] = feature
        self._dirty = True

    def get(self, instance_iri: Iri) -> list[FeatureGeometry]:
        """All stored shapes for an instance, across graphs."""
        return sorted(
            (f for (_, iri), f in self._features.items() if iri == instance_iri),
            key=lambda f: f.graph.value)

    def all_features(self) -> list[FeatureGeometry]:
        return sorted(self._features.values(),
                      key=lambda f: (f.instance_iri.value, f.graph.value))

    def _tree(self) -> _Node | None:
        if self._dirty:
            items = list(self._features.values())
            self._root = _build(items) if items else None
            self._dirty = False
        return self._root

    def _candidates(self, bbox) -> list[FeatureGeometry]:
        root = self._tree()
        if root is None:
            return []
        out, stack = [], [root]
        while stack:
            node = stack.pop()
            if not bbox_intersects(node.bbox, bbox):
                continue
            if node.items is not None:
                out.extend(f for f in node.items if bbox_intersects(f.bbox, bbox))
            else:
                stack.extend(node.children)
        return out

    def query_intersects(self, shape: Shape) -> list[FeatureGeometry]:
        """Stored features whose geometry intersects the query shape."""
        bbox = bbox_of(shape.coords)
        hits = [f for f in self._candidates(bbox) if shapes_intersect(shape, f.shape)]
        return sorted(hits, key=lambda f: (f.instance_iri.value, f.graph.value))

    def query_within_distance(self, point: tuple[float, float],
                              meters: float) -> list[FeatureGeometry]:
        """Features within the given distance of a point, nearest first."""
        if meters < 0:
            raise ValidationError("distance must be non-negative")
        ranked = []
        for f in self._features.values():
            d = distance_to_shape_m(point, f.shape)
            if d <= meters:
                ranked.append((d, f.instance_iri.value, f.graph.value, f))
        ranked.sort(key=lambda r: r[:3])
        return [f for _, _, _, f in ranked]
