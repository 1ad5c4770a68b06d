"""Deterministic input files used across the test suite.

Timelog binaries are assembled from plain (ms, days, lat_raw, lon_raw, dlvs)
tuples; tests compute expected decoded rows from those same tuples with
their own arithmetic, never from the bytes, so the byte reader is checked
against an independent oracle.
"""

import io
import struct
import zipfile

EPOCH_1980_MS = 315_532_800_000

SOWING_TASKDATA = """<?xml version="1.0" encoding="UTF-8"?>
<ISO11783_TaskData VersionMajor="4" VersionMinor="2" ManagementSoftwareManufacturer="x">
  <DVC A="DVC-1" B="Amazone D9 Drille"/>
  <DVC A="DVC-2" B="Fendt Traktor"/>
  <PFD A="PFD-1" C="Acker Nord" D="40000">
    <PLN A="1">
      <LSG A="1">
        <PNT A="2" C="52.000" D="7.000"/>
        <PNT A="2" C="52.000" D="7.010"/>
        <PNT A="2" C="52.010" D="7.010"/>
        <PNT A="2" C="52.010" D="7.000"/>
      </LSG>
    </PLN>
  </PFD>
  <PFD A="PFD-2" C="Acker S&#252;d" D="30000">
    <PLN A="1">
      <LSG A="1">
        <PNT A="2" C="52.000" D="7.020"/>
        <PNT A="2" C="52.000" D="7.030"/>
        <PNT A="2" C="52.010" D="7.030"/>
        <PNT A="2" C="52.010" D="7.020"/>
      </LSG>
    </PLN>
  </PFD>
  <TSK A="TSK-1" B="Drillen Acker Nord" E="PFD-1" G="4">
    <DAN C="DVC-1"/>
    <TLG A="TLG00001"/>
  </TSK>
  <TSK A="TSK-2" B="Transport" E="PFD-2" G="4">
    <DAN C="DVC-2"/>
    <TLG A="TLG00002"/>
  </TSK>
</ISO11783_TaskData>
""".encode("utf-8")

# hand-enumerated inventory of SOWING_TASKDATA:
#   DVC-1, DVC-2:    (2 type + id + label + deviceClass) * 2   = 10
#   PFD-1, PFD-2:    (2 type + id + label + area + geom) * 2   = 12
#   TSK-1, TSK-2:    (2 type + id + label + status
#                     + onField + usesDevice + hasTimelog) * 2 = 16
#   TLG00001/2:      (2 type + name) * 2                       = 6
SOWING_TRIPLE_COUNT = 44
SOWING_GEOMETRY_COUNT = 2

TIMELOG_HEADER_TWO_COLUMNS = b"""<?xml version="1.0" encoding="UTF-8"?>
<TIM A="" B="" D="4">
  <PTN A="" B=""/>
  <DLV A="0043" B="" C="DET-1"/>
  <DLV A="0006" B="" C="DET-2"/>
</TIM>
"""

TIMELOG_HEADER_ONE_COLUMN = b"""<?xml version="1.0" encoding="UTF-8"?>
<TIM A="" B="" D="4">
  <PTN A="" B=""/>
  <DLV A="0043" B="" C="DET-1"/>
</TIM>
"""

TIMELOG_HEADER_NO_POSITION = b"""<?xml version="1.0" encoding="UTF-8"?>
<TIM A="" B="" D="4">
  <DLV A="0043" B="" C="DET-1"/>
</TIM>
"""


def pack_record(ms, days, lat_raw=None, lon_raw=None, dlvs=()):
    """One binary timelog record; position block present when lat_raw given."""
    buf = struct.pack("<IH", ms, days)
    if lat_raw is not None:
        buf += struct.pack("<ii", lat_raw, lon_raw)
    buf += struct.pack("<B", len(dlvs))
    for index, value in dlvs:
        buf += struct.pack("<Bi", index, value)
    return buf


def pack_records(specs):
    return b"".join(pack_record(*spec) for spec in specs)


def field_a_record_specs(n=300, day=14000):
    """Records tracing lines inside the PFD-1 square, 1 Hz, 2 DLV columns."""
    specs = []
    for i in range(n):
        ms = 36_000_000 + i * 1000
        lat_raw = 520_050_000 + (i % 40) * 1_000
        lon_raw = 70_010_000 + (i % 80) * 1_000
        specs.append((ms, day, lat_raw, lon_raw,
                      ((0, 1000 + i), (1, 2500 + 2 * i))))
    return specs


def field_b_record_specs(n=200, day=14000):
    specs = []
    for i in range(n):
        ms = 50_000_000 + i * 1000
        lat_raw = 520_050_000 + (i % 40) * 1_000
        lon_raw = 70_210_000 + (i % 80) * 1_000
        specs.append((ms, day, lat_raw, lon_raw, ((0, 800 + i),)))
    return specs


def sowing_taskset_files():
    return {
        "TASKDATA.XML": SOWING_TASKDATA,
        "TLG00001.XML": TIMELOG_HEADER_TWO_COLUMNS,
        "TLG00001.BIN": pack_records(field_a_record_specs()),
        "TLG00002.XML": TIMELOG_HEADER_ONE_COLUMN,
        "TLG00002.BIN": pack_records(field_b_record_specs()),
    }


def zip_taskset(files):
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as archive:
        for name, data in sorted(files.items()):
            archive.writestr(name, data)
    return buf.getvalue()


# -- separation trajectory: 40 rows in field A, 15 on the road, 40 in field B --

SEPARATION_TASKDATA = """<?xml version="1.0" encoding="UTF-8"?>
<ISO11783_TaskData VersionMajor="4" VersionMinor="2">
  <PFD A="PFD-A" C="Feld A" D="11000">
    <PLN A="1"><LSG A="1">
      <PNT A="2" C="52.000" D="7.000"/><PNT A="2" C="52.000" D="7.010"/>
      <PNT A="2" C="52.010" D="7.010"/><PNT A="2" C="52.010" D="7.000"/>
    </LSG></PLN>
  </PFD>
  <PFD A="PFD-B" C="Feld B" D="11000">
    <PLN A="1"><LSG A="1">
      <PNT A="2" C="52.000" D="7.020"/><PNT A="2" C="52.000" D="7.030"/>
      <PNT A="2" C="52.010" D="7.030"/><PNT A="2" C="52.010" D="7.020"/>
    </LSG></PLN>
  </PFD>
  <TSK A="TSK-1" B="Mähdrusch" G="4">
    <TLG A="TLG00001"/>
  </TSK>
</ISO11783_TaskData>
""".encode("utf-8")

SEPARATION_TASKDATA_NO_FIELDS = """<?xml version="1.0" encoding="UTF-8"?>
<ISO11783_TaskData VersionMajor="4" VersionMinor="2">
  <TSK A="TSK-1" B="Mähdrusch" G="4">
    <TLG A="TLG00001"/>
  </TSK>
</ISO11783_TaskData>
""".encode("utf-8")


def trajectory_record_specs(day=14000):
    """40 rows inside field A, 15 transfer rows on a road, 40 inside field B.

    Containment of every row is known analytically: fields span
    lat 52.000-52.010 and the road runs at lat 52.015.
    """
    specs = []
    t = 0
    for i in range(40):  # inside A: lon 7.0005 .. 7.0083, lat 52.005
        specs.append((30_000_000 + t * 1000, day,
                      520_050_000, 70_005_000 + i * 2_000, ((0, 2000 + i),)))
        t += 1
    for j in range(15):  # road at lat 52.015, outside both fields
        specs.append((30_000_000 + t * 1000, day,
                      520_150_000, 70_090_000 + j * 10_000, ((0, 5000 + j),)))
        t += 1
    for k in range(40):  # inside B: lon 7.0205 .. 7.0283
        specs.append((30_000_000 + t * 1000, day,
                      520_050_000, 70_205_000 + k * 2_000, ((0, 3000 + k),)))
        t += 1
    return specs


def separation_taskset_files(with_fields=True):
    taskdata = SEPARATION_TASKDATA if with_fields else SEPARATION_TASKDATA_NO_FIELDS
    return {
        "TASKDATA.XML": taskdata,
        "TLG00001.XML": TIMELOG_HEADER_ONE_COLUMN,
        "TLG00001.BIN": pack_records(trajectory_record_specs()),
    }


FALLBACK_BOUNDARIES_GEOJSON = b"""{
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "id": "osm-field-a",
     "properties": {"name": "Feld A (OSM)"},
     "geometry": {"type": "Polygon", "coordinates":
       [[[7.000, 52.000], [7.010, 52.000], [7.010, 52.010],
         [7.000, 52.010], [7.000, 52.000]]]}},
    {"type": "Feature", "id": "osm-field-b",
     "properties": {"name": "Feld B (OSM)"},
     "geometry": {"type": "Polygon", "coordinates":
       [[[7.020, 52.000], [7.030, 52.000], [7.030, 52.010],
         [7.020, 52.010], [7.020, 52.000]]]}},
    {"type": "Feature", "id": "osm-field-far",
     "properties": {"name": "Feld fern"},
     "geometry": {"type": "Polygon", "coordinates":
       [[[8.500, 53.000], [8.510, 53.000], [8.510, 53.010],
         [8.500, 53.010], [8.500, 53.000]]]}}
  ]
}
"""

NRW_CSV = (
    b"id,area_ha,crop,geometry\n"
    b'F001,4.0,winter wheat,"POLYGON((7.0 52.0, 7.01 52.0, 7.01 52.01,'
    b' 7.0 52.01, 7.0 52.0))"\n'
    b'F002,3.5,barley,"POLYGON((7.02 52.0, 7.03 52.0, 7.03 52.01,'
    b' 7.02 52.01, 7.02 52.0))"\n'
)
# per row: 2 type + localId + areaHa + crop + hasGeometry = 6 triples
NRW_TRIPLE_COUNT = 12
NRW_GEOMETRY_COUNT = 2
