"""Code-shipped finalized vocabularies.

Four definitions are installed on every boot: a base vocabulary with the
shared Field/Task/Device/Timelog classes, plus the three formats the
platform parses out of the box (ISOXML task data, the NRW field-application
CSV, GeoJSON boundary files). The NRW column set is a stand-in schema; real
NRW exports differ.
"""

from .model import Datatype, Iri
from . import vocab
from .wikinormia import Cardinality, ConceptClass, FormatDefinition, PropertyDef

CORE_FORMAT = Iri(vocab.FORMAT_NS.value + "core")
ISOXML_FORMAT = Iri(vocab.FORMAT_NS.value + "isoxml")
NRW_FORMAT = Iri(vocab.FORMAT_NS.value + "nrw-application")
GEOJSON_FORMAT = Iri(vocab.FORMAT_NS.value + "geojson-boundaries")

LOCAL_ID = Iri(vocab.VOCAB_NS.value + "localId")
CROP = Iri(vocab.VOCAB_NS.value + "crop")


def _p(iri, label, range_, cardinality=Cardinality.OPTIONAL_ONE, csv=None):
    return PropertyDef(iri, label, range_, cardinality, csv)


def _cls(iri, label, props=(), parent=None):
    return ConceptClass(iri, label, tuple(props), parent)


def core_definition() -> FormatDefinition:
    return FormatDefinition(
        format_iri=CORE_FORMAT,
        label="Base farm vocabulary",
        status="final",
        classes=(
            _cls(vocab.FIELD_CLASS, "Field", (
                _p(vocab.LABEL, "label", Datatype.STRING),
                _p(vocab.AREA_HA, "area (ha)", Datatype.DECIMAL),
                _p(vocab.HAS_GEOMETRY, "boundary", Datatype.GEOMETRY),
            )),
            _cls(vocab.TASK_CLASS, "Task", (
                _p(vocab.USES_DEVICE, "uses device", vocab.DEVICE_CLASS_IRI,
                   Cardinality.MANY),
                _p(vocab.ON_FIELD, "on field", vocab.FIELD_CLASS,
                   Cardinality.MANY),
                _p(vocab.HAS_TIMELOG, "has timelog", vocab.TIMELOG_CLASS,
                   Cardinality.MANY),
                _p(vocab.TASK_STATUS, "status", Datatype.STRING),
            )),
            _cls(vocab.DEVICE_CLASS_IRI, "Device", (
                _p(vocab.DEVICE_CLASS, "device class", Datatype.STRING),
            )),
            _cls(vocab.TIMELOG_CLASS, "Timelog", (
                _p(vocab.DERIVED_FROM, "derived from", vocab.TIMELOG_CLASS),
            )),
        ),
    )


def isoxml_definition() -> FormatDefinition:
    ns = ISOXML_FORMAT.value + "/"
    return FormatDefinition(
        format_iri=ISOXML_FORMAT,
        label="ISOXML task data",
        status="final",
        classes=(
            _cls(Iri(ns + "Task"), "ISOXML task", (
                _p(Iri(ns + "taskId"), "task id", Datatype.STRING,
                   Cardinality.REQUIRED_ONE),
            ), parent=vocab.TASK_CLASS),
            _cls(Iri(ns + "Device"), "ISOXML device", (
                _p(Iri(ns + "deviceId"), "device id", Datatype.STRING,
                   Cardinality.REQUIRED_ONE),
            ), parent=vocab.DEVICE_CLASS_IRI),
            _cls(Iri(ns + "Partfield"), "ISOXML partfield", (
                _p(Iri(ns + "partfieldId"), "partfield id", Datatype.STRING,
                   Cardinality.REQUIRED_ONE),
            ), parent=vocab.FIELD_CLASS),
            _cls(Iri(ns + "Timelog"), "ISOXML timelog", (
                _p(Iri(ns + "timelogName"), "timelog name", Datatype.STRING,
                   Cardinality.REQUIRED_ONE),
            ), parent=vocab.TIMELOG_CLASS),
        ),
    )


def nrw_definition() -> FormatDefinition:
    ns = NRW_FORMAT.value + "/"
    return FormatDefinition(
        format_iri=NRW_FORMAT,
        label="NRW field application (CSV)",
        status="final",
        classes=(
            _cls(Iri(ns + "Field"), "NRW application field", (
                _p(LOCAL_ID, "id", Datatype.STRING,
                   Cardinality.REQUIRED_ONE, csv="id"),
                _p(vocab.AREA_HA, "area_ha", Datatype.DECIMAL,
                   Cardinality.OPTIONAL_ONE, csv="area_ha"),
                _p(CROP, "crop", Datatype.STRING,
                   Cardinality.OPTIONAL_ONE, csv="crop"),
                _p(vocab.HAS_GEOMETRY, "geometry", Datatype.GEOMETRY,
                   Cardinality.OPTIONAL_ONE, csv="geometry"),
            ), parent=vocab.FIELD_CLASS),
        ),
    )


def geojson_definition() -> FormatDefinition:
    ns = GEOJSON_FORMAT.value + "/"
    return FormatDefinition(
        format_iri=GEOJSON_FORMAT,
        label="GeoJSON field boundaries",
        status="final",
        classes=(
            _cls(Iri(ns + "BoundaryField"), "boundary field", (
                _p(vocab.LABEL, "name", Datatype.STRING),
                _p(vocab.HAS_GEOMETRY, "boundary", Datatype.GEOMETRY),
            ), parent=vocab.FIELD_CLASS),
        ),
    )


BUILTIN_DEFINITIONS = (
    core_definition,
    isoxml_definition,
    nrw_definition,
    geojson_definition,
)


def install_builtins(registry) -> None:
    for make in BUILTIN_DEFINITIONS:
        registry.install_builtin(make())
