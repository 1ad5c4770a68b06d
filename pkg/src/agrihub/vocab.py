"""Well-known IRIs: core predicates, classes, system graphs, namespaces."""

from .model import Iri

VOCAB_NS = Iri("https://agrihub.example/vocab/")
INSTANCE_NS = Iri("https://agrihub.example/id/")
FORMAT_NS = Iri("https://agrihub.example/format/")

# core predicates
TYPE = Iri(VOCAB_NS.value + "type")
LABEL = Iri(VOCAB_NS.value + "label")
SAME_AS = Iri(VOCAB_NS.value + "sameAs")
HAS_GEOMETRY = Iri(VOCAB_NS.value + "hasGeometry")
HAS_TIMELOG = Iri(VOCAB_NS.value + "hasTimelog")
USES_DEVICE = Iri(VOCAB_NS.value + "usesDevice")
ON_FIELD = Iri(VOCAB_NS.value + "onField")
DEVICE_CLASS = Iri(VOCAB_NS.value + "deviceClass")
DERIVED_FROM = Iri(VOCAB_NS.value + "derivedFrom")
TASK_STATUS = Iri(VOCAB_NS.value + "taskStatus")
AREA_HA = Iri(VOCAB_NS.value + "areaHa")
PARENT_CLASS = Iri(VOCAB_NS.value + "parentClass")
HAS_CLASS = Iri(VOCAB_NS.value + "hasClass")
HAS_PROPERTY = Iri(VOCAB_NS.value + "hasProperty")
PROPERTY_RANGE = Iri(VOCAB_NS.value + "range")
CARDINALITY = Iri(VOCAB_NS.value + "cardinality")
VERSION = Iri(VOCAB_NS.value + "version")
STATUS = Iri(VOCAB_NS.value + "status")

# core classes shared by every format
FIELD_CLASS = Iri(VOCAB_NS.value + "Field")
TASK_CLASS = Iri(VOCAB_NS.value + "Task")
DEVICE_CLASS_IRI = Iri(VOCAB_NS.value + "Device")
TIMELOG_CLASS = Iri(VOCAB_NS.value + "Timelog")
FORMAT_CLASS = Iri(VOCAB_NS.value + "Format")
CONCEPT_CLASS = Iri(VOCAB_NS.value + "Class")
PROPERTY_CLASS = Iri(VOCAB_NS.value + "Property")

# system graphs
WIKINORMIA_GRAPH = Iri("urn:agrihub:graph:wikinormia")
LINKS_GRAPH = Iri("urn:agrihub:graph:links")
ANNOTATIONS_GRAPH = Iri("urn:agrihub:graph:annotations")
DERIVED_GRAPH = Iri("urn:agrihub:graph:derived")
OSM_FALLBACK_GRAPH = Iri("urn:agrihub:graph:osm-fallback")
FILE_GRAPH_PREFIX = "urn:agrihub:graph:file:"

# label used for rows outside every known field
TRANSFER_LABEL = "transfer"
