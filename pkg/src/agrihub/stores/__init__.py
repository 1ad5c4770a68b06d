from .geometry import (
    FeatureGeometry,
    GridIou,
    LineString,
    Point,
    Polygon,
    bbox_intersects,
    bbox_of,
    distance_to_shape_m,
    grid_iou,
    point_in_polygon,
    shapes_intersect,
)
from .graph import BindingSet, GraphStore, TriplePattern, Variable
from .persistence import PersistentStores
from .spatial import SpatialStore
from .timeseries import SeriesRow, TimeSeriesStore

__all__ = [
    "BindingSet",
    "FeatureGeometry",
    "GraphStore",
    "GridIou",
    "LineString",
    "PersistentStores",
    "Point",
    "Polygon",
    "SeriesRow",
    "SpatialStore",
    "TimeSeriesStore",
    "TriplePattern",
    "Variable",
    "bbox_intersects",
    "bbox_of",
    "distance_to_shape_m",
    "grid_iou",
    "point_in_polygon",
    "shapes_intersect",
]
