import { describe, expect, it } from "vitest";

import { renderRunNotFound, renderSeparationMap } from "../src/map.js";
import type { FeatureCollection, GeoFeature, RunInfo } from "../src/types.js";

const FIELD_A = "https://agrihub.example/id/t/PFD-A";
const FIELD_B = "https://agrihub.example/id/t/PFD-B";
const SPEED = "https://agrihub.example/vocab/machineSpeed";

function boundary(field: string, x0: number): GeoFeature {
  return {
    type: "Feature",
    properties: { role: "boundary", field },
    geometry: {
      type: "Polygon",
      coordinates: [[[x0, 52.0], [x0 + 0.01, 52.0], [x0 + 0.01, 52.01],
                     [x0, 52.01], [x0, 52.0]]],
    },
  };
}

function record(segment: string, lon: number, t: number,
                speed: number): GeoFeature {
  return {
    type: "Feature",
    properties: { role: "record", segment, timestamp: t, [SPEED]: speed },
    geometry: { type: "Point", coordinates: [lon, 52.005] },
  };
}

function fixture(): { info: RunInfo; geojson: FeatureCollection } {
  const features: GeoFeature[] = [boundary(FIELD_A, 7.0),
                                  boundary(FIELD_B, 7.02)];
  let t = 0;
  for (let i = 0; i < 40; i++) features.push(
    record(FIELD_A, 7.001 + i * 0.0002, t++, 1.5 + i * 0.01));
  for (let j = 0; j < 15; j++) features.push(
    record("transfer", 7.011 + j * 0.0005, t++, 6.0));
  for (let k = 0; k < 40; k++) features.push(
    record(FIELD_B, 7.021 + k * 0.0002, t++, 2.0 + k * 0.01));
  return {
    info: {
      runId: "abc123",
      sourceSeries: "https://agrihub.example/id/t/TLG00001",
      stats: { [FIELD_A]: 40, transfer: 15, [FIELD_B]: 40 },
    },
    geojson: { type: "FeatureCollection", features },
  };
}

function app(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app") as HTMLElement;
}

describe("separation map", () => {
  it("renders three legend entries with the API's row counts", () => {
    const { info, geojson } = fixture();
    const view = renderSeparationMap(app(), info, geojson);
    const entries = [...view.legend.querySelectorAll(".legend-entry")];
    expect(entries.length).toBe(3);
    const texts = entries.map((e) => e.textContent ?? "");
    expect(texts.some((t) => t.includes("PFD-A") && t.includes("40 rows")))
      .toBe(true);
    expect(texts.some((t) => t.includes("transfer") && t.includes("15 rows")))
      .toBe(true);
    expect(texts.some((t) => t.includes("PFD-B") && t.includes("40 rows")))
      .toBe(true);
  });

  it("partitions point colors by segment label", () => {
    const { info, geojson } = fixture();
    const view = renderSeparationMap(app(), info, geojson);
    const bySegment = new Map<string, Set<string>>();
    for (const circle of view.svg.querySelectorAll("circle")) {
      const segment = (circle as SVGCircleElement).dataset.segment!;
      const fill = circle.getAttribute("fill")!;
      if (!bySegment.has(segment)) bySegment.set(segment, new Set());
      bySegment.get(segment)!.add(fill);
    }
    expect(bySegment.size).toBe(3);
    // same label, same color
    for (const fills of bySegment.values()) expect(fills.size).toBe(1);
    // different labels, different colors
    const distinct = new Set(
      [...bySegment.values()].map((fills) => [...fills][0]));
    expect(distinct.size).toBe(3);
  });

  it("renders every feature of the collection", () => {
    const { info, geojson } = fixture();
    const view = renderSeparationMap(app(), info, geojson);
    const drawn = view.svg.querySelectorAll("circle, polygon").length;
    expect(drawn).toBe(geojson.features.length);
  });

  it("legend counts come verbatim from the API, never recounted", () => {
    const { info, geojson } = fixture();
    // deliberately inconsistent stats: the UI must echo them, not recount
    info.stats[FIELD_A] = 999;
    const view = renderSeparationMap(app(), info, geojson);
    const texts = [...view.legend.querySelectorAll(".legend-entry")]
      .map((e) => e.textContent ?? "");
    expect(texts.some((t) => t.includes("999 rows"))).toBe(true);
  });

  it("re-colors points from the selected value column", () => {
    const { info, geojson } = fixture();
    const view = renderSeparationMap(app(), info, geojson);
    const before = [...view.svg.querySelectorAll("circle")].map(
      (c) => c.getAttribute("fill"));
    expect(new Set(before).size).toBe(3); // one color per segment

    view.columnSelect.value = SPEED;
    view.columnSelect.dispatchEvent(new Event("change"));
    const after = [...view.svg.querySelectorAll("circle")].map(
      (c) => c.getAttribute("fill"));
    // ramp colors vary with the value, far more shades than labels
    expect(new Set(after).size).toBeGreaterThan(3);
    // min and max of the column map to the ramp endpoints
    expect(after).toContain("rgb(33, 102, 172)");
    expect(after).toContain("rgb(178, 24, 43)");
  });

  it("shows an empty-state for a run without features", () => {
    const container = app();
    renderSeparationMap(container, {
      runId: "xyz", sourceSeries: "s", stats: {},
    }, { type: "FeatureCollection", features: [] });
    expect(container.querySelector(".empty-state")).not.toBeNull();
  });

  it("renders a not-found page for unknown runs", () => {
    const container = app();
    renderRunNotFound(container, "nope");
    expect(container.querySelector(".not-found")!.textContent)
      .toContain("nope");
  });
});
