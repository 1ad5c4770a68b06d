#!/usr/bin/env python3
"""End-to-end walkthrough against a demo workspace (library mode).

Builds the workspace if missing, ingests the sample uploads, runs the
sowing-machine query, deduplicates fields across sources, and separates a
field-hopping timelog into per-field segments.

Usage: python scripts/run_demo.py [workspace-dir]
"""

import json
import subprocess
import sys
from pathlib import Path

from agrihub import vocab
from agrihub.model import Iri, Literal
from agrihub.platform import Platform, PlatformConfig
from agrihub.stores.graph import TriplePattern, Variable


def main():
    workspace = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo")
    if not (workspace / "config.json").exists():
        subprocess.run([sys.executable,
                        str(Path(__file__).with_name("make_demo_data.py")),
                        str(workspace)], check=True)

    platform = Platform(PlatformConfig.from_file(workspace / "config.json"))
    admin = platform.config.admin_token

    print("== ingest ==")
    for name in ("taskdata.zip", "fields.csv"):
        receipt = platform.ingest_file((workspace / name).read_bytes(), name,
                                       token=admin)
        print(f"{name}: {receipt.counts} warnings={list(receipt.warnings)} "
              f"linked={receipt.linked_pairs}")

    print("\n== all tasks in which a sowing machine was used ==")
    bindings = platform.query_graph(admin, [
        TriplePattern(Variable("t"), vocab.TYPE, vocab.TASK_CLASS),
        TriplePattern(Variable("t"), vocab.USES_DEVICE, Variable("d")),
        TriplePattern(Variable("d"), vocab.DEVICE_CLASS, Literal("sowing")),
    ])
    for binding in bindings:
        print("task:", binding["t"].value, " device:", binding["d"].value)

    print("\n== field separation on the field-hopping timelog ==")
    timelog = [s for s in platform.stores.ts.series_iris()
               if s.value.endswith("TLG00002")][0]
    result = platform.run_separation(admin, timelog)
    for segment in result.segments:
        print(f"{segment.label_text:60s} rows={len(segment.rows):4d} "
              f"[{segment.start_ms} .. {segment.end_ms}]")
    print("stats:", json.dumps(result.stats, indent=2))
    print("run id:", result.run_id)
    if platform.config.data_dir:
        print("geojson:", platform.config.data_dir / "runs" /
              f"{result.run_id}.json")


if __name__ == "__main__":
    main()
