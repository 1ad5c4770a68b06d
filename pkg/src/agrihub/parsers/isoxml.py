"""ISOXML (ISO 11783-10) task data and binary timelog decoding.

Covered subset: TSK / DVC / PFD elements with device allocations (DAN),
partfield boundary polygons (PLN > LSG > PNT) and timelog references (TLG);
paired TLGnnnnn.XML + TLGnnnnn.BIN files with the TIM / PTN / DLV record
layout. Grids, treatment zones and allocation stamps are out of scope.

Binary record layout, all little-endian:

    msSinceMidnight   u32
    daysSince1980     u16     (epoch base 1980-01-01T00:00:00Z)
    lat               i32     x 1e-7 degrees   } only when the header
    lon               i32     x 1e-7 degrees   } declares a PTN element
    dlvCount          u8
    dlvCount x { dlvIndex u8, value i32 }

Timestamps are converted to Unix epoch milliseconds on decode.
"""

from __future__ import annotations

import io
import zipfile
from collections import Counter
from dataclasses import dataclass
from decimal import Decimal
from xml.etree import ElementTree as ET

from .. import vocab
from ..builtin_formats import ISOXML_FORMAT
from ..errors import ParseError, ValidationError
from ..model import Datatype, Iri, Literal, Triple, mint_iri
from ..stores.geometry import FeatureGeometry, Polygon
from ..stores.timeseries import SeriesRow
from .base import ParseOutput

# Unix milliseconds at 1980-01-01T00:00:00Z, the timelog day-count base
EPOCH_1980_MS = 315_532_800_000
MS_PER_DAY = 86_400_000

ISOXML_NS = ISOXML_FORMAT.value + "/"
TASK_CLASS = Iri(ISOXML_NS + "Task")
DEVICE_CLASS = Iri(ISOXML_NS + "Device")
PARTFIELD_CLASS = Iri(ISOXML_NS + "Partfield")
TIMELOG_CLASS = Iri(ISOXML_NS + "Timelog")
TASK_ID = Iri(ISOXML_NS + "taskId")
DEVICE_ID = Iri(ISOXML_NS + "deviceId")
PARTFIELD_ID = Iri(ISOXML_NS + "partfieldId")
TIMELOG_NAME = Iri(ISOXML_NS + "timelogName")

# designator keyword -> device class; first hit wins, checked in order
DEVICE_KEYWORDS = (
    ("drill", "sowing"),
    ("drille", "sowing"),
    ("seed", "sowing"),
    ("sä", "sowing"),
    ("sow", "sowing"),
    ("spray", "sprayer"),
    ("spritze", "sprayer"),
    ("harvest", "harvester"),
    ("drescher", "harvester"),
    ("combine", "harvester"),
    ("tractor", "tractor"),
    ("traktor", "tractor"),
    ("schlepper", "tractor"),
    ("spread", "spreader"),
    ("streuer", "spreader"),
)

# process-variable table: DDI hex -> (property IRI, scale, unit)
DDI_TABLE = {
    "0006": (Iri(vocab.VOCAB_NS.value + "applicationRate"), Decimal("0.01"), "l/ha"),
    "0043": (Iri(vocab.VOCAB_NS.value + "machineSpeed"), Decimal("0.001"), "m/s"),
    "0053": (Iri(vocab.VOCAB_NS.value + "yieldRate"), Decimal("0.01"), "kg/ha"),
    "008D": (Iri(vocab.VOCAB_NS.value + "workState"), Decimal("1"), ""),
}


def classify_device(designator: str) -> str:
    lowered = (designator or "").lower()
    for keyword, device_class in DEVICE_KEYWORDS:
        if keyword in lowered:
            return device_class
    return "other"


def _xml_root(data: bytes, expected_tag: str) -> ET.Element:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = sum(len(l) + 1 for l in data.split(b"\n")[: line - 1]) + column
        raise ParseError(f"malformed XML: {exc}", offset=offset)
    if root.tag != expected_tag:
        raise ParseError(f"expected {expected_tag} root, got {root.tag}")
    return root


def _ring_from_pln(pln: ET.Element, warnings: list[str], owner: str):
    points = []
    for lsg in pln.findall("LSG"):
        for pnt in lsg.findall("PNT"):
            lat, lon = pnt.get("C"), pnt.get("D")
            if lat is None or lon is None:
                warnings.append(f"point without coordinates in {owner}")
                continue
            try:
                points.append((float(lon), float(lat)))
            except ValueError:
                warnings.append(f"unparseable coordinates in {owner}")
    if len(points) < 3:
        if points:
            warnings.append(f"boundary of {owner} has fewer than 3 points")
        return None
    if points[0] != points[-1]:
        points.append(points[0])
    try:
        return Polygon(tuple(points))
    except ValidationError as exc:
        warnings.append(f"invalid boundary of {owner}: {exc}")
        return None


def parse_isoxml_taskdata(data: bytes,
                          namespace: Iri = vocab.INSTANCE_NS) -> ParseOutput:
    """Parse a TASKDATA.XML document into triples and field boundaries.

    Dangling references and unknown elements produce warnings, not errors;
    field data is messy and the pipeline must ingest imperfect files.
    """
    root = _xml_root(data, "ISO11783_TaskData")
    out = ParseOutput()
    known: dict[str, Iri] = {}
    unknown = Counter()

    def instance(local_id: str) -> Iri:
        iri = known.get(local_id)
        if iri is None:
            iri = known[local_id] = mint_iri(namespace, local_id)
        return iri

    def add(s, p, o):
        out.triples.add(Triple(s, p, o))

    devices = root.findall("DVC")
    partfields = root.findall("PFD")
    tasks = root.findall("TSK")
    for element in root:
        if element.tag not in ("DVC", "PFD", "TSK"):
            unknown[element.tag] += 1

    for dvc in devices:
        device_id = dvc.get("A")
        if not device_id:
            out.warnings.append("DVC without id skipped")
            continue
        iri = instance(device_id)
        add(iri, vocab.TYPE, DEVICE_CLASS)
        add(iri, vocab.TYPE, vocab.DEVICE_CLASS_IRI)
        add(iri, DEVICE_ID, Literal(device_id))
        designator = dvc.get("B", "")
        if designator:
            add(iri, vocab.LABEL, Literal(designator))
        add(iri, vocab.DEVICE_CLASS, Literal(classify_device(designator)))

    for pfd in partfields:
        field_id = pfd.get("A")
        if not field_id:
            out.warnings.append("PFD without id skipped")
            continue
        iri = instance(field_id)
        add(iri, vocab.TYPE, PARTFIELD_CLASS)
        add(iri, vocab.TYPE, vocab.FIELD_CLASS)
        add(iri, PARTFIELD_ID, Literal(field_id))
        if pfd.get("C"):
            add(iri, vocab.LABEL, Literal(pfd.get("C")))
        area_m2 = pfd.get("D")
        if area_m2:
            try:
                add(iri, vocab.AREA_HA,
                    Literal(str(Decimal(area_m2) / 10_000), Datatype.DECIMAL))
            except ArithmeticError:
                out.warnings.append(f"unparseable area on {field_id}")
        for pln in pfd.findall("PLN"):
            ring = _ring_from_pln(pln, out.warnings, field_id)
            if ring is not None:
                out.geometries.append(FeatureGeometry(iri, ring))
                add(iri, vocab.HAS_GEOMETRY, Literal(iri.value, Datatype.GEOMETRY))

    declared_devices = {dvc.get("A") for dvc in devices if dvc.get("A")}
    declared_fields = {pfd.get("A") for pfd in partfields if pfd.get("A")}

    for tsk in tasks:
        task_id = tsk.get("A")
        if not task_id:
            out.warnings.append("TSK without id skipped")
            continue
        iri = instance(task_id)
        add(iri, vocab.TYPE, TASK_CLASS)
        add(iri, vocab.TYPE, vocab.TASK_CLASS)
        add(iri, TASK_ID, Literal(task_id))
        if tsk.get("B"):
            add(iri, vocab.LABEL, Literal(tsk.get("B")))
        if tsk.get("G"):
            add(iri, vocab.TASK_STATUS, Literal(tsk.get("G")))
        field_ref = tsk.get("E")
        if field_ref:
            if field_ref in declared_fields:
                add(iri, vocab.ON_FIELD, instance(field_ref))
            else:
                out.warnings.append(f"dangling reference {field_ref}")
        for dan in tsk.findall("DAN"):
            device_ref = dan.get("C")
            if not device_ref:
                out.warnings.append(f"DAN without device reference on {task_id}")
            elif device_ref in declared_devices:
                add(iri, vocab.USES_DEVICE, instance(device_ref))
            else:
                out.warnings.append(f"dangling reference {device_ref}")
        for tlg in tsk.findall("TLG"):
            name = tlg.get("A")
            if not name:
                out.warnings.append(f"TLG without name on {task_id}")
                continue
            tlg_iri = instance(name)
            add(iri, vocab.HAS_TIMELOG, tlg_iri)
            add(tlg_iri, vocab.TYPE, TIMELOG_CLASS)
            add(tlg_iri, vocab.TYPE, vocab.TIMELOG_CLASS)
            add(tlg_iri, TIMELOG_NAME, Literal(name))
        for child in tsk:
            if child.tag not in ("DAN", "TLG"):
                unknown[child.tag] += 1

    for tag in sorted(unknown):
        out.warnings.append(f"skipped {unknown[tag]} unknown {tag} element(s)")
    return out


# -- timelogs -------------------------------------------------------------------

@dataclass(frozen=True)
class TimelogLayout:
    has_position: bool
    columns: tuple[tuple[int, Iri, Decimal, str], ...]  # (dlvIndex, prop, scale, unit)

    def __post_init__(self):
        indexes = [c[0] for c in self.columns]
        if len(indexes) != len(set(indexes)):
            raise ValidationError("duplicate dlv index in timelog layout")
        if any(c[2] <= 0 for c in self.columns):
            raise ValidationError("timelog column scale must be positive")

    def column_map(self) -> dict[int, tuple[Iri, Decimal]]:
        return {idx: (prop, scale) for idx, prop, scale, _ in self.columns}


def parse_timelog_header(data: bytes) -> TimelogLayout:
    """Read the TIM / PTN / DLV layout from the timelog's companion XML."""
    root = _xml_root(data, "TIM")
    has_position = root.find("PTN") is not None
    columns = []
    for index, dlv in enumerate(root.findall("DLV")):
        ddi = (dlv.get("A") or "").upper()
        if ddi in DDI_TABLE:
            prop, scale, unit = DDI_TABLE[ddi]
        else:
            # unknown process variable: keep raw values under a minted IRI
            safe = ddi if ddi.isalnum() and ddi else f"x{index}"
            prop = Iri(vocab.VOCAB_NS.value + "ddi/" + safe)
            scale, unit = Decimal("1"), ""
        columns.append((index, prop, scale, unit))
    return TimelogLayout(has_position, tuple(columns))


def decode_timelog_records(layout: TimelogLayout,
                           data: bytes) -> list[SeriesRow]:
    """Decode fixed little-endian records; rows come back in file order."""
    columns = layout.column_map()
    rows = []
    pos = 0
    size = len(data)
    record = 0

    def need(count: int, what: str) -> None:
        if pos + count > size:
            raise ParseError(
                f"truncated {what} in record {record} at byte offset {pos}",
                offset=pos)

    while pos < size:
        need(6, "timestamp")
        ms = int.from_bytes(data[pos:pos + 4], "little")
        days = int.from_bytes(data[pos + 4:pos + 6], "little")
        pos += 6
        position = None
        if layout.has_position:
            need(8, "position")
            lat_raw = int.from_bytes(data[pos:pos + 4], "little", signed=True)
            lon_raw = int.from_bytes(data[pos + 4:pos + 8], "little", signed=True)
            position = (lon_raw * 1e-7, lat_raw * 1e-7)
            pos += 8
        need(1, "dlv count")
        dlv_count = data[pos]
        pos += 1
        values = {}
        for _ in range(dlv_count):
            need(5, "dlv entry")
            index = data[pos]
            raw = int.from_bytes(data[pos + 1:pos + 5], "little", signed=True)
            pos += 5
            column = columns.get(index)
            if column is None:
                raise ParseError(
                    f"dlv index {index} not in layout (record {record})",
                    offset=pos - 5)
            prop, scale = column
            values[prop] = Decimal(raw) * scale
        timestamp = EPOCH_1980_MS + days * MS_PER_DAY + ms
        rows.append(SeriesRow(timestamp, position, values))
        record += 1
    return rows


def parse_isoxml_timelog(header_xml: bytes,
                         binary: bytes) -> tuple[TimelogLayout, list[SeriesRow]]:
    layout = parse_timelog_header(header_xml)
    return layout, decode_timelog_records(layout, binary)


# -- task sets (TASKDATA.XML plus TLG pairs, possibly zipped) ---------------------

def parse_isoxml_taskset(files: dict[str, bytes],
                         namespace: Iri = vocab.INSTANCE_NS) -> ParseOutput:
    """Parse a whole task-data set: TASKDATA.XML plus its timelog pairs."""
    by_upper = {name.upper(): data for name, data in files.items()}
    taskdata = by_upper.get("TASKDATA.XML")
    if taskdata is None:
        raise ParseError("TASKDATA.XML not found in task-data set")
    out = parse_isoxml_taskdata(taskdata, namespace)

    referenced = sorted(
        t.object.lexical for t in out.triples if t.predicate == TIMELOG_NAME)
    for name in referenced:
        upper = name.upper()
        header = by_upper.get(upper + ".XML")
        binary = by_upper.get(upper + ".BIN")
        if header is None or binary is None:
            out.warnings.append(f"timelog {name} files missing")
            continue
        _, rows = parse_isoxml_timelog(header, binary)
        rows = _ensure_ascending(rows, name, out.warnings)
        out.series.append((mint_iri(namespace, name), rows))

    known = {n.upper() for n in referenced}
    for upper in sorted(by_upper):
        base = upper.rsplit(".", 1)[0]
        if upper.startswith("TLG") and base not in known:
            out.warnings.append(f"unreferenced timelog file {upper} skipped")
    return out


def _ensure_ascending(rows, name, warnings):
    """Timelog records should already be chronological; repair if not."""
    cleaned = []
    dropped = 0
    for row in sorted(rows, key=lambda r: r.timestamp):
        if cleaned and row.timestamp == cleaned[-1].timestamp:
            dropped += 1
            continue
        cleaned.append(row)
    if len(cleaned) != len(rows):
        warnings.append(
            f"timelog {name}: reordered records, dropped {dropped} duplicate "
            f"timestamp(s)")
    elif any(a.timestamp > b.timestamp for a, b in zip(rows, rows[1:])):
        warnings.append(f"timelog {name}: records were not chronological")
    return cleaned


def parse_isoxml_upload(data: bytes,
                        namespace: Iri = vocab.INSTANCE_NS) -> ParseOutput:
    """Registry entry point: a bare TASKDATA.XML or a zipped task-data set."""
    if data[:4] == b"PK\x03\x04":
        try:
            with zipfile.ZipFile(io.BytesIO(data)) as archive:
                files = {}
                for info in archive.infolist():
                    if info.is_dir():
                        continue
                    name = info.filename.rsplit("/", 1)[-1]
                    files[name] = archive.read(info)
        except (zipfile.BadZipFile, OSError, ValueError) as exc:
            raise ParseError(f"unreadable archive: {exc}")
        return parse_isoxml_taskset(files, namespace)
    return parse_isoxml_taskset({"TASKDATA.XML": data}, namespace)
