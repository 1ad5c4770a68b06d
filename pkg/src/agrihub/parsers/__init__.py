from .base import ParseOutput, ParserRegistration, ParserRegistry
from .csv_schema import parse_csv_with_schema, parse_wkt
from .geojson import parse_geojson_boundaries
from .isoxml import (
    TimelogLayout,
    parse_isoxml_taskdata,
    parse_isoxml_taskset,
    parse_isoxml_timelog,
)

__all__ = [
    "ParseOutput",
    "ParserRegistration",
    "ParserRegistry",
    "TimelogLayout",
    "parse_csv_with_schema",
    "parse_geojson_boundaries",
    "parse_isoxml_taskdata",
    "parse_isoxml_taskset",
    "parse_isoxml_timelog",
    "parse_wkt",
]
