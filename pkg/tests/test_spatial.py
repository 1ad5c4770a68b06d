import random

import pytest

from agrihub.errors import ValidationError
from agrihub.model import Iri
from agrihub.stores import (
    FeatureGeometry,
    LineString,
    Point,
    Polygon,
    SpatialStore,
    grid_iou,
    point_in_polygon,
)
from agrihub.stores.geometry import METERS_PER_DEGREE

from .oracles import naive_intersects, rect_iou

G = Iri("urn:agrihub:graph:spatial-test")


def rect(x0, y0, x1, y1):
    return Polygon(((x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)))


def feat(name, shape):
    return FeatureGeometry(Iri(f"https://agrihub.example/id/{name}"), shape, G)


UNIT = rect(0.0, 0.0, 1.0, 1.0)


class TestPointInPolygon:
    def test_center_inside(self):
        assert point_in_polygon((0.5, 0.5), UNIT)

    def test_outside_bbox(self):
        assert not point_in_polygon((2.0, 0.5), UNIT)

    def test_vertex_counts_as_inside(self):
        assert point_in_polygon((0.0, 0.0), UNIT)

    def test_edge_counts_as_inside(self):
        assert point_in_polygon((0.5, 0.0), UNIT)

    def test_concave(self):
        # L-shape: notch cut from the top right
        poly = Polygon(((0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2), (0, 0)))
        assert point_in_polygon((0.5, 1.5), poly)
        assert not point_in_polygon((1.5, 1.5), poly)


class TestPolygonValidation:
    def test_open_ring_rejected(self):
        with pytest.raises(ValidationError):
            Polygon(((0, 0), (1, 0), (1, 1), (0, 1)))

    def test_short_ring_rejected(self):
        with pytest.raises(ValidationError):
            Polygon(((0, 0), (1, 0), (0, 0)))

    def test_out_of_range_coordinate_rejected(self):
        with pytest.raises(ValidationError):
            feat("bad", rect(0, 0, 200.0, 1))

    def test_bbox_tight(self):
        f = feat("f", rect(1.0, 2.0, 3.0, 5.0))
        assert f.bbox == (1.0, 2.0, 3.0, 5.0)


class TestIntersectsQuery:
    def test_identical_polygon_found(self):
        store = SpatialStore()
        store.insert(feat("a", UNIT))
        assert [f.instance_iri.value for f in store.query_intersects(UNIT)] \
            == ["https://agrihub.example/id/a"]

    def test_disjoint_empty(self):
        store = SpatialStore()
        store.insert(feat("a", UNIT))
        assert store.query_intersects(rect(5, 5, 6, 6)) == []

    def test_replace_same_instance(self):
        store = SpatialStore()
        store.insert(feat("a", UNIT))
        store.insert(feat("a", rect(10, 10, 11, 11)))
        assert store.query_intersects(UNIT) == []
        assert len(store.query_intersects(rect(10, 10, 11, 11))) == 1

    def test_contained_polygon_detected(self):
        store = SpatialStore()
        store.insert(feat("inner", rect(0.4, 0.4, 0.6, 0.6)))
        assert len(store.query_intersects(UNIT)) == 1
        # and the other way around
        assert len(SpatialStoreWith(feat("outer", UNIT))
                   .query_intersects(rect(0.4, 0.4, 0.6, 0.6))) == 1

    def test_random_rectangles_match_naive_scan(self):
        rng = random.Random(7)
        store = SpatialStore()
        features = []
        for i in range(1000):
            x, y = rng.uniform(0, 50), rng.uniform(0, 50)
            w, h = rng.uniform(0.01, 3), rng.uniform(0.01, 3)
            f = feat(f"r{i}", rect(x, y, x + w, y + h))
            features.append(f)
            store.insert(f)
        for q in range(100):
            x, y = rng.uniform(-2, 50), rng.uniform(-2, 50)
            w, h = rng.uniform(0.01, 5), rng.uniform(0.01, 5)
            query = rect(x, y, x + w, y + h)
            assert store.query_intersects(query) == naive_intersects(features, query)


def SpatialStoreWith(*features):
    store = SpatialStore()
    for f in features:
        store.insert(f)
    return store


class TestWithinDistance:
    def test_zero_distance_on_vertex(self):
        store = SpatialStoreWith(feat("a", UNIT))
        assert len(store.query_within_distance((0.0, 0.0), 0.0)) == 1

    def test_meridian_offset_included_and_excluded(self):
        # edge at lat 0; query point 100 m north along the meridian,
        # constructed from the module's own meters-per-degree constant
        store = SpatialStoreWith(feat("a", rect(0.0, -1.0, 1.0, 0.0)))
        point = (0.5, 100.0 / METERS_PER_DEGREE)
        assert len(store.query_within_distance(point, 150.0)) == 1
        assert store.query_within_distance(point, 50.0) == []

    def test_empty_store(self):
        assert SpatialStore().query_within_distance((0, 0), 10) == []

    def test_negative_distance_rejected(self):
        with pytest.raises(ValidationError):
            SpatialStore().query_within_distance((0, 0), -1)

    def test_point_inside_polygon_distance_zero(self):
        store = SpatialStoreWith(feat("a", UNIT))
        assert len(store.query_within_distance((0.5, 0.5), 0.0)) == 1


class TestGridIou:
    def test_identical(self):
        assert grid_iou(UNIT, UNIT, 256).iou == 1.0

    def test_disjoint(self):
        assert grid_iou(UNIT, rect(3, 3, 4, 4), 256).iou == 0.0

    def test_half_shift_analytic(self):
        # unit square vs itself shifted 0.5 in lon: IoU = 0.5 / 1.5 = 1/3
        shifted = rect(0.5, 0.0, 1.5, 1.0)
        r = grid_iou(UNIT, shifted, 256)
        assert abs(r.iou - 1.0 / 3.0) <= 0.02
        assert not r.degenerate

    def test_symmetry_exact(self):
        a, b = rect(0, 0, 2, 1.3), rect(0.7, 0.2, 2.9, 2.2)
        assert grid_iou(a, b, 128).iou == grid_iou(b, a, 128).iou

    def test_degenerate_bbox(self):
        line_like = Polygon(((0, 0), (1, 0), (0.5, 0.0), (0, 0)))
        r = grid_iou(line_like, line_like, 64)
        assert r.degenerate and r.iou == 0.0

    def test_resolution_floor(self):
        with pytest.raises(ValidationError):
            grid_iou(UNIT, UNIT, 8)

    def test_twenty_random_rectangle_pairs(self):
        rng = random.Random(11)
        for _ in range(20):
            a = sorted([rng.uniform(0, 10), rng.uniform(0, 10)])
            b = sorted([rng.uniform(0, 10), rng.uniform(0, 10)])
            c = sorted([rng.uniform(0, 10), rng.uniform(0, 10)])
            d = sorted([rng.uniform(0, 10), rng.uniform(0, 10)])
            ra = rect(a[0], b[0], a[1] + 0.5, b[1] + 0.5)
            rb = rect(c[0], d[0], c[1] + 0.5, d[1] + 0.5)
            expected = rect_iou((a[0], b[0], a[1] + 0.5, b[1] + 0.5),
                                (c[0], d[0], c[1] + 0.5, d[1] + 0.5))
            got = grid_iou(ra, rb, 256)
            assert abs(got.iou - expected) <= 0.02
            assert got.iou == grid_iou(rb, ra, 256).iou

    def test_error_shrinks_as_resolution_doubles(self):
        # doubling ladder starts at 64: below that, half-cell quantization
        # noise on small intersections exceeds the 0.005 slack
        rng = random.Random(3)
        for _ in range(10):
            xs = sorted([rng.uniform(0, 10), rng.uniform(0, 10)])
            ys = sorted([rng.uniform(0, 10), rng.uniform(0, 10)])
            xs2 = sorted([rng.uniform(0, 10), rng.uniform(0, 10)])
            ys2 = sorted([rng.uniform(0, 10), rng.uniform(0, 10)])
            a = (xs[0], ys[0], xs[1] + 0.4, ys[1] + 0.4)
            b = (xs2[0], ys2[0], xs2[1] + 0.4, ys2[1] + 0.4)
            expected = rect_iou(a, b)
            err = None
            for res in (64, 128, 256, 512):
                got = abs(grid_iou(rect(*a), rect(*b), res).iou - expected)
                if err is not None:
                    assert got <= err + 0.005
                err = got
