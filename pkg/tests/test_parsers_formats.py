import pytest

from agrihub import vocab
from agrihub.builtin_formats import (
    GEOJSON_FORMAT,
    ISOXML_FORMAT,
    NRW_FORMAT,
    LOCAL_ID,
    CROP,
    install_builtins,
    nrw_definition,
)
from agrihub.errors import (
    AmbiguousFormatError,
    ConflictError,
    ParseError,
    PreconditionError,
    UnknownFormatError,
    ValidationError,
)
from agrihub.model import Datatype, Iri, Literal, Triple, mint_iri
from agrihub.parsers import parse_csv_with_schema, parse_geojson_boundaries, parse_wkt
from agrihub.parsers.base import ParserRegistration
from agrihub.parsers.registrations import build_parser_registry
from agrihub.stores import PersistentStores, Point, Polygon
from agrihub.wikinormia import FormatDefinition, FormatRegistry

from . import fixtures

NS = Iri("https://agrihub.example/id/t/")


def inst(name):
    return mint_iri(NS, name)


class TestWkt:
    def test_polygon(self):
        shape = parse_wkt("POLYGON((0 0, 1 0, 1 1, 0 1, 0 0))")
        assert isinstance(shape, Polygon)
        assert len(shape.coords) == 5

    def test_polygon_auto_closes(self):
        shape = parse_wkt("POLYGON((0 0, 1 0, 1 1, 0 1))")
        assert shape.coords[0] == shape.coords[-1]

    def test_point(self):
        assert parse_wkt("POINT(7.1 52.2)") == Point((7.1, 52.2))

    def test_garbage_rejected(self):
        for bad in ["", "POLYGON", "POLYGON(())", "CIRCLE(1 2)",
                    "POLYGON((1 2 3))"]:
            with pytest.raises(ValidationError):
                parse_wkt(bad)


class TestCsvSchema:
    def test_nrw_fixture(self):
        out = parse_csv_with_schema(nrw_definition(), fixtures.NRW_CSV, NS)
        assert out.row_errors == []
        assert len(out.triples) == fixtures.NRW_TRIPLE_COUNT
        assert len(out.geometries) == fixtures.NRW_GEOMETRY_COUNT
        f1 = inst("F001")
        assert Triple(f1, vocab.TYPE, vocab.FIELD_CLASS) in out.triples
        assert Triple(f1, LOCAL_ID, Literal("F001")) in out.triples
        assert Triple(f1, vocab.AREA_HA, Literal("4.0", Datatype.DECIMAL)) \
            in out.triples
        assert Triple(f1, CROP, Literal("winter wheat")) in out.triples

    def test_header_only(self):
        out = parse_csv_with_schema(
            nrw_definition(), b"id,area_ha,crop,geometry\n", NS)
        assert not out.triples and not out.geometries

    def test_bad_decimal_cell_skips_row_only(self):
        data = (b"id,area_ha,crop,geometry\n"
                b"F001,x,wheat,\n"
                b"F002,2.5,barley,\n")
        out = parse_csv_with_schema(nrw_definition(), data, NS)
        assert len(out.row_errors) == 1
        assert "row 1" in out.row_errors[0]
        assert Triple(inst("F002"), vocab.AREA_HA,
                      Literal("2.5", Datatype.DECIMAL)) in out.triples
        assert not any(t.subject == inst("F001") for t in out.triples)

    def test_missing_required_column(self):
        with pytest.raises(ParseError, match="id"):
            parse_csv_with_schema(nrw_definition(), b"area_ha,crop\n1.0,x\n", NS)

    def test_optional_column_absent_ok(self):
        out = parse_csv_with_schema(
            nrw_definition(), b"id,crop\nF1,wheat\n", NS)
        assert Triple(inst("F1"), CROP, Literal("wheat")) in out.triples

    def test_draft_format_rejected(self):
        from dataclasses import replace
        draft = replace(nrw_definition(), status="draft")
        with pytest.raises(PreconditionError):
            parse_csv_with_schema(draft, fixtures.NRW_CSV, NS)

    def test_row_ordinal_ids_when_no_id_property(self):
        from dataclasses import replace
        from agrihub.wikinormia import ConceptClass, PropertyDef, Cardinality
        cls = ConceptClass(
            Iri("https://agrihub.example/format/x/C"), "c", (
                PropertyDef(CROP, "crop", Datatype.STRING,
                            Cardinality.OPTIONAL_ONE, "crop"),))
        definition = FormatDefinition(
            Iri("https://agrihub.example/format/x"), "x", status="final",
            classes=(cls,))
        out = parse_csv_with_schema(definition, b"crop\nwheat\nbarley\n", NS)
        assert Triple(inst("row-1"), CROP, Literal("wheat")) in out.triples
        assert Triple(inst("row-2"), CROP, Literal("barley")) in out.triples

    def test_not_utf8(self):
        with pytest.raises(ParseError):
            parse_csv_with_schema(nrw_definition(), b"\xff\xfe\x00id", NS)


class TestGeoJson:
    def test_square_feature(self):
        data = b"""{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":{"name":"Feld"},
             "geometry":{"type":"Polygon","coordinates":
               [[[7,52],[7.01,52],[7.01,52.01],[7,52.01],[7,52]]]}}]}"""
        out = parse_geojson_boundaries(data, NS)
        assert len(out.geometries) == 1
        field = inst("Feld")
        assert Triple(field, vocab.TYPE, vocab.FIELD_CLASS) in out.triples
        assert Triple(field, vocab.LABEL, Literal("Feld")) in out.triples

    def test_empty_collection(self):
        out = parse_geojson_boundaries(
            b'{"type":"FeatureCollection","features":[]}', NS)
        assert not out.triples and not out.geometries

    def test_point_feature_warns_polygons_parse(self):
        data = b"""{"type":"FeatureCollection","features":[
            {"type":"Feature","properties":{},
             "geometry":{"type":"Point","coordinates":[7,52]}},
            {"type":"Feature","properties":{"name":"ok"},
             "geometry":{"type":"Polygon","coordinates":
               [[[7,52],[7.01,52],[7.01,52.01],[7,52.01],[7,52]]]}}]}"""
        out = parse_geojson_boundaries(data, NS)
        assert len(out.geometries) == 1
        assert len(out.warnings) == 1

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            parse_geojson_boundaries(b"{nope", NS)

    def test_fallback_fixture_parses(self):
        out = parse_geojson_boundaries(fixtures.FALLBACK_BOUNDARIES_GEOJSON, NS)
        assert len(out.geometries) == 3


def make_registry():
    formats = FormatRegistry(stores=PersistentStores())
    install_builtins(formats)
    return formats, build_parser_registry(formats)


class TestDetection:
    def test_taskdata_by_name(self):
        _, parsers = make_registry()
        assert parsers.detect_format(
            fixtures.SOWING_TASKDATA, "TASKDATA.XML") == ISOXML_FORMAT

    def test_taskdata_magic_with_odd_name(self):
        _, parsers = make_registry()
        assert parsers.detect_format(
            fixtures.SOWING_TASKDATA, "upload.dat") == ISOXML_FORMAT

    def test_zip_detected(self):
        _, parsers = make_registry()
        data = fixtures.zip_taskset(fixtures.sowing_taskset_files())
        assert parsers.detect_format(data, "export.zip") == ISOXML_FORMAT

    def test_geojson(self):
        _, parsers = make_registry()
        assert parsers.detect_format(
            fixtures.FALLBACK_BOUNDARIES_GEOJSON, "fields.geojson") \
            == GEOJSON_FORMAT

    def test_nrw_csv(self):
        _, parsers = make_registry()
        assert parsers.detect_format(fixtures.NRW_CSV, "fields.csv") == NRW_FORMAT

    def test_random_bin_unknown(self):
        _, parsers = make_registry()
        with pytest.raises(UnknownFormatError):
            parsers.detect_format(b"\x01\x02\x03\x04", "x.bin")

    def test_ambiguous_lists_candidates(self):
        _, parsers = make_registry()
        # a FeatureCollection carried in a file named like ISOXML matches
        # the ISOXML glob and the GeoJSON magic
        data = b'{"type":"FeatureCollection","features":[]}'
        with pytest.raises(AmbiguousFormatError) as err:
            parsers.detect_format(data, "TASKDATA.XML")
        assert len(err.value.candidates) == 2

    def test_duplicate_registration_conflicts(self):
        formats, parsers = make_registry()
        with pytest.raises(ConflictError):
            parsers.register(ParserRegistration(
                ISOXML_FORMAT, ("*.x",), lambda d: False,
                lambda d, ns: None))

    def test_register_on_draft_rejected(self):
        formats, parsers = make_registry()
        draft_iri = Iri("https://agrihub.example/format/newfmt")
        from agrihub.wikinormia import ConceptClass
        formats.create_draft(FormatDefinition(
            draft_iri, "new", classes=(
                ConceptClass(Iri(draft_iri.value + "/C"), "c"),)))
        with pytest.raises(PreconditionError):
            parsers.register(ParserRegistration(
                draft_iri, ("*.n",), lambda d: False, lambda d, ns: None))

    def test_register_after_finalize_dispatches(self):
        formats, parsers = make_registry()
        iri = Iri("https://agrihub.example/format/linesfmt")
        from agrihub.wikinormia import ConceptClass
        formats.create_draft(FormatDefinition(
            iri, "lines", classes=(
                ConceptClass(Iri(iri.value + "/C"), "c"),)))
        formats.finalize(iri)

        from agrihub.parsers import ParseOutput
        parsers.register(ParserRegistration(
            iri, ("*.lines",), lambda d: False,
            lambda d, ns: ParseOutput()))
        assert parsers.detect_format(b"anything", "f.lines") == iri
        assert parsers.parse(iri, b"x", NS).counts()["triples"] == 0
