"""Planar geometry primitives over WGS84 (lon, lat) coordinates.

All computations are planar in degree space; distances use an
equirectangular approximation with a fixed meters-per-degree constant,
which is adequate at single-field extents (< 5 km) and documented as such.
Polygon membership follows the even-odd rule with boundary points counted
as inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from ..errors import ValidationError
from ..model import Iri

# meters per degree of latitude; longitude scales by cos(lat)
METERS_PER_DEGREE = 111_320.0

Coord = tuple[float, float]  # (lon, lat)


@dataclass(frozen=True)
class Point:
    coord: Coord

    @property
    def coords(self) -> tuple[Coord, ...]:
        return (self.coord,)


@dataclass(frozen=True)
class LineString:
    coords: tuple[Coord, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(tuple(c) for c in self.coords))
        if len(self.coords) < 2:
            raise ValidationError("linestring needs at least 2 coordinates")


@dataclass(frozen=True)
class Polygon:
    """Single closed exterior ring; first coordinate equals the last."""

    coords: tuple[Coord, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(tuple(c) for c in self.coords))
        if len(self.coords) < 4:
            raise ValidationError("polygon ring needs at least 4 coordinates")
        if self.coords[0] != self.coords[-1]:
            raise ValidationError("polygon ring must be closed (first == last)")

    @property
    def edges(self):
        return zip(self.coords, self.coords[1:])


Shape = Union["Point", "LineString", "Polygon"]


def _check_coords(coords: Sequence[Coord]) -> None:
    for lon, lat in coords:
        if not (-180.0 <= lon <= 180.0) or not (-90.0 <= lat <= 90.0):
            raise ValidationError(f"coordinate out of WGS84 range: ({lon}, {lat})")


def bbox_of(coords: Sequence[Coord]) -> tuple[float, float, float, float]:
    lons = [c[0] for c in coords]
    lats = [c[1] for c in coords]
    return (min(lons), min(lats), max(lons), max(lats))


@dataclass(frozen=True)
class FeatureGeometry:
    """A shape tied to an instance IRI and the named graph it came from.

    Parsers emit features before the file graph exists; the ingest step
    rebinds ``graph`` before any store accepts the feature.
    """

    instance_iri: Iri
    shape: Shape
    graph: Optional[Iri] = None
    bbox: tuple[float, float, float, float] = field(init=False)

    def __post_init__(self):
        if not isinstance(self.shape, (Point, LineString, Polygon)):
            raise ValidationError("shape must be Point, LineString or Polygon")
        _check_coords(self.shape.coords)
        object.__setattr__(self, "bbox", bbox_of(self.shape.coords))


def bbox_intersects(a, b) -> bool:
    return a[0] <= b[2] and b[0] <= a[2] and a[1] <= b[3] and b[1] <= a[3]


def _orient(o: Coord, a: Coord, b: Coord) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p: Coord, a: Coord, b: Coord) -> bool:
    if _orient(a, b, p) != 0.0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a1: Coord, a2: Coord, b1: Coord, b2: Coord) -> bool:
    d1 = _orient(b1, b2, a1)
    d2 = _orient(b1, b2, a2)
    d3 = _orient(a1, a2, b1)
    d4 = _orient(a1, a2, b2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0 \
            and d3 != 0 and d4 != 0:
        return True
    return (_on_segment(a1, b1, b2) or _on_segment(a2, b1, b2)
            or _on_segment(b1, a1, a2) or _on_segment(b2, a1, a2))


def point_in_polygon(point: Coord, polygon: Polygon) -> bool:
    """Even-odd rule; points on the boundary count as inside."""
    x, y = point
    for a, b in polygon.edges:
        if _on_segment(point, a, b):
            return True
    inside = False
    for (x1, y1), (x2, y2) in polygon.edges:
        # half-open rule on y avoids double-counting vertex crossings
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < x_cross:
                inside = not inside
    return inside


def shapes_intersect(a: Shape, b: Shape) -> bool:
    """Exact planar intersection test between any two shapes."""
    if isinstance(a, Point):
        if isinstance(b, Point):
            return a.coord == b.coord
        if isinstance(b, Polygon):
            return point_in_polygon(a.coord, b)
        return any(_on_segment(a.coord, p, q) for p, q in zip(b.coords, b.coords[1:]))
    if isinstance(b, Point):
        return shapes_intersect(b, a)

    a_segs = list(zip(a.coords, a.coords[1:]))
    b_segs = list(zip(b.coords, b.coords[1:]))
    for s1, s2 in a_segs:
        for t1, t2 in b_segs:
            if segments_intersect(s1, s2, t1, t2):
                return True
    # no edge crossings: one shape may contain the other entirely
    if isinstance(b, Polygon) and point_in_polygon(a.coords[0], b):
        return True
    if isinstance(a, Polygon) and point_in_polygon(b.coords[0], a):
        return True
    return False


def _point_segment_distance_m(p: Coord, a: Coord, b: Coord, k_lon: float) -> float:
    # scale lon by cos(lat at query point) so degrees become comparable meters
    px, py = p[0] * k_lon, p[1] * METERS_PER_DEGREE
    ax, ay = a[0] * k_lon, a[1] * METERS_PER_DEGREE
    bx, by = b[0] * k_lon, b[1] * METERS_PER_DEGREE
    dx, dy = bx - ax, by - ay
    if dx == 0.0 and dy == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def distance_to_shape_m(point: Coord, shape: Shape) -> float:
    """Minimum vertex-or-edge distance in meters, equirectangular."""
    k_lon = METERS_PER_DEGREE * math.cos(math.radians(point[1]))
    coords = shape.coords
    if isinstance(shape, Point):
        return _point_segment_distance_m(point, coords[0], coords[0], k_lon)
    if isinstance(shape, Polygon) and point_in_polygon(point, shape):
        return 0.0
    return min(
        _point_segment_distance_m(point, a, b, k_lon)
        for a, b in zip(coords, coords[1:])
    )


@dataclass(frozen=True)
class GridIou:
    iou: float
    degenerate: bool = False


def _raster_rows(polygon: Polygon, bbox, resolution: int) -> list[int]:
    """Rasterize onto a resolution x resolution grid as per-row bitmasks.

    A cell belongs to the polygon when its center point is inside by the
    even-odd rule, computed per scanline from sorted edge crossings.
    """
    min_x, min_y, max_x, max_y = bbox
    cell_w = (max_x - min_x) / resolution
    cell_h = (max_y - min_y) / resolution
    edges = list(polygon.edges)
    rows = []
    for j in range(resolution):
        y = min_y + (j + 0.5) * cell_h
        crossings = []
        for (x1, y1), (x2, y2) in edges:
            if (y1 > y) != (y2 > y):
                crossings.append(x1 + (y - y1) * (x2 - x1) / (y2 - y1))
        crossings.sort()
        mask = 0
        for lo, hi in zip(crossings[::2], crossings[1::2]):
            # centers strictly greater than lo and strictly less than hi;
            # first index with min_x + (i + 0.5) * cell_w > lo
            i_lo = max(0, math.floor((lo - min_x) / cell_w - 0.5) + 1)
            i_hi = min(resolution - 1, math.ceil((hi - min_x) / cell_w - 0.5) - 1)
            if i_hi >= i_lo:
                mask |= ((1 << (i_hi - i_lo + 1)) - 1) << i_lo
        rows.append(mask)
    return rows


def grid_iou(a: Polygon, b: Polygon, resolution: int = 256) -> GridIou:
    """Intersection-over-union of two polygons on a shared raster grid.

    Both polygons are rasterized over their union bounding box, a cell
    counting when its center lies inside. Deterministic and exactly
    symmetric in its arguments.
    """
    if resolution < 16:
        raise ValidationError("grid resolution must be at least 16")
    ba, bb = bbox_of(a.coords), bbox_of(b.coords)
    bbox = (min(ba[0], bb[0]), min(ba[1], bb[1]), max(ba[2], bb[2]), max(ba[3], bb[3]))
    if bbox[0] == bbox[2] or bbox[1] == bbox[3]:
        return GridIou(0.0, degenerate=True)
    rows_a = _raster_rows(a, bbox, resolution)
    rows_b = _raster_rows(b, bbox, resolution)
    inter = sum((ra & rb).bit_count() for ra, rb in zip(rows_a, rows_b))
    union = sum((ra | rb).bit_count() for ra, rb in zip(rows_a, rows_b))
    if union == 0:
        return GridIou(0.0, degenerate=True)
    return GridIou(inter / union)
