"""Built-in parser registrations for the shipped formats."""

from __future__ import annotations

from ..builtin_formats import GEOJSON_FORMAT, ISOXML_FORMAT, NRW_FORMAT
from .base import ParserRegistration, ParserRegistry
from .csv_schema import parse_csv_with_schema
from .geojson import parse_geojson_boundaries
from .isoxml import parse_isoxml_upload


def _isoxml_magic(data: bytes) -> bool:
    if data[:4] == b"PK\x03\x04":
        return True
    return b"<ISO11783_TaskData" in data[:512]


def _nrw_magic(data: bytes) -> bool:
    try:
        header = data.split(b"\n", 1)[0][:1024].decode("utf-8")
    except UnicodeDecodeError:
        return False
    columns = {c.strip().strip('"') for c in header.split(",")}
    return {"id", "area_ha"} <= columns


def _geojson_magic(data: bytes) -> bool:
    head = data[:512].lstrip()
    return head.startswith(b"{") and b'"FeatureCollection"' in data[:512]


def build_parser_registry(format_registry) -> ParserRegistry:
    registry = ParserRegistry(format_registry)
    registry.register(ParserRegistration(
        format_iri=ISOXML_FORMAT,
        globs=("taskdata.xml", "*.zip"),
        magic=_isoxml_magic,
        parser=parse_isoxml_upload,
    ))
    registry.register(ParserRegistration(
        format_iri=NRW_FORMAT,
        globs=("*.csv",),
        magic=_nrw_magic,
        parser=lambda data, namespace: parse_csv_with_schema(
            format_registry.get_format(NRW_FORMAT), data, namespace),
    ))
    registry.register(ParserRegistration(
        format_iri=GEOJSON_FORMAT,
        globs=("*.geojson",),
        magic=_geojson_magic,
        parser=parse_geojson_boundaries,
    ))
    return registry
