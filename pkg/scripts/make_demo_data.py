#!/usr/bin/env python3
"""Generate a demo workspace: config file, fallback boundaries, and sample
uploads (an ISOXML task-data zip with two timelogs, and an NRW-style CSV).

Usage: python scripts/make_demo_data.py [target-dir]
"""

import io
import json
import struct
import sys
import zipfile
from pathlib import Path

TASKDATA = """<?xml version="1.0" encoding="UTF-8"?>
<ISO11783_TaskData VersionMajor="4" VersionMinor="2">
  <DVC A="DVC-1" B="Amazone D9 Drille"/>
  <DVC A="DVC-2" B="Claas Mähdrescher"/>
  <PFD A="PFD-1" C="Acker Nord" D="40000">
    <PLN A="1"><LSG A="1">
      <PNT A="2" C="52.000" D="7.000"/><PNT A="2" C="52.000" D="7.010"/>
      <PNT A="2" C="52.010" D="7.010"/><PNT A="2" C="52.010" D="7.000"/>
    </LSG></PLN>
  </PFD>
  <PFD A="PFD-2" C="Acker Ost" D="30000">
    <PLN A="1"><LSG A="1">
      <PNT A="2" C="52.000" D="7.020"/><PNT A="2" C="52.000" D="7.030"/>
      <PNT A="2" C="52.010" D="7.030"/><PNT A="2" C="52.010" D="7.020"/>
    </LSG></PLN>
  </PFD>
  <TSK A="TSK-1" B="Drillen" E="PFD-1" G="4">
    <DAN C="DVC-1"/>
    <TLG A="TLG00001"/>
  </TSK>
  <TSK A="TSK-2" B="Ernte mit Fahrt" E="PFD-2" G="4">
    <DAN C="DVC-2"/>
    <TLG A="TLG00002"/>
  </TSK>
</ISO11783_TaskData>
""".encode("utf-8")

TLG_HEADER = b"""<?xml version="1.0" encoding="UTF-8"?>
<TIM A="" B="" D="4">
  <PTN A="" B=""/>
  <DLV A="0043" B="" C="DET-1"/>
  <DLV A="0053" B="" C="DET-2"/>
</TIM>
"""

NRW_CSV = (
    "id,area_ha,crop,geometry\n"
    'F001,4.0,winter wheat,"POLYGON((7.0 52.0, 7.01 52.0, 7.01 52.01,'
    " 7.0 52.01, 7.0 52.0))\"\n"
    'F002,3.0,barley,"POLYGON((7.02 52.0, 7.03 52.0, 7.03 52.01,'
    " 7.02 52.01, 7.02 52.0))\"\n"
).encode("utf-8")


def record(ms, days, lat_raw, lon_raw, dlvs):
    buf = struct.pack("<IH", ms, days) + struct.pack("<ii", lat_raw, lon_raw)
    buf += struct.pack("<B", len(dlvs))
    for index, value in dlvs:
        buf += struct.pack("<Bi", index, value)
    return buf


def work_inside_field(base_lon_raw, n, start_ms):
    out = b""
    for i in range(n):
        out += record(start_ms + i * 1000, 16000,
                      520_050_000 + (i % 40) * 1000,
                      base_lon_raw + (i % 80) * 1000,
                      ((0, 1500 + i), (1, 70_000 + 13 * i)))
    return out


def field_hopping_trajectory(start_ms):
    """Work in field 1, drive along a road, work in field 2."""
    out = b""
    t = start_ms
    for i in range(120):
        out += record(t, 16000, 520_050_000, 70_005_000 + (i % 45) * 100,
                      ((0, 2200), (1, 81_000 + 17 * i)))
        t += 1000
    for j in range(30):  # road north of both fields
        out += record(t, 16000, 520_150_000, 70_090_000 + j * 5000,
                      ((0, 5200), (1, 0)))
        t += 1000
    for k in range(120):
        out += record(t, 16000, 520_050_000, 70_205_000 + (k % 45) * 100,
                      ((0, 1900), (1, 76_000 + 11 * k)))
        t += 1000
    return out


def main():
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo")
    target.mkdir(parents=True, exist_ok=True)

    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w") as archive:
        archive.writestr("TASKDATA.XML", TASKDATA)
        archive.writestr("TLG00001.XML", TLG_HEADER)
        archive.writestr("TLG00001.BIN", work_inside_field(70_010_000, 240,
                                                           30_000_000))
        archive.writestr("TLG00002.XML", TLG_HEADER)
        archive.writestr("TLG00002.BIN", field_hopping_trajectory(40_000_000))
    (target / "taskdata.zip").write_bytes(buf.getvalue())
    (target / "fields.csv").write_bytes(NRW_CSV)

    boundaries = {
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature", "id": f"osm-{n}",
             "properties": {"name": f"OSM Feld {n}"},
             "geometry": {"type": "Polygon", "coordinates": [[
                 [7.0 + dx, 52.0], [7.01 + dx, 52.0], [7.01 + dx, 52.01],
                 [7.0 + dx, 52.01], [7.0 + dx, 52.0]]]}}
            for n, dx in (("a", 0.0), ("b", 0.02))
        ],
    }
    (target / "osm-boundaries.geojson").write_text(json.dumps(boundaries))

    config = {
        "adminToken": "demo-admin-token",
        "dataDir": "data",
        "fallbackBoundariesPath": "osm-boundaries.geojson",
        "autoDedup": True,
        "dedupThreshold": 0.7,
    }
    (target / "config.json").write_text(json.dumps(config, indent=2))
    print(f"demo workspace written to {target}/")
    print("next: agrihub --config", target / "config.json", "ingest",
          target / "taskdata.zip")


if __name__ == "__main__":
    main()
