// Separation map: boundary polygons plus one dot per recorded point,
// colored by segment label, or by a selected value column through the
// linear ramp. Legend counts come verbatim from the run stats.

import { labelColors, rampColor, TRANSFER_COLOR } from "./colors.js";
import type { FeatureCollection, GeoFeature, RunInfo } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

interface Extent {
  minX: number;
  minY: number;
  maxX: number;
  maxY: number;
}

function coordsOf(feature: GeoFeature): number[][] {
  if (feature.geometry.type === "Point") {
    return [feature.geometry.coordinates as number[]];
  }
  if (feature.geometry.type === "Polygon") {
    return (feature.geometry.coordinates as number[][][])[0];
  }
  return [];
}

function extentOf(collection: FeatureCollection): Extent | null {
  let extent: Extent | null = null;
  for (const feature of collection.features) {
    for (const [x, y] of coordsOf(feature)) {
      if (extent === null) {
        extent = { minX: x, minY: y, maxX: x, maxY: y };
      } else {
        extent.minX = Math.min(extent.minX, x);
        extent.minY = Math.min(extent.minY, y);
        extent.maxX = Math.max(extent.maxX, x);
        extent.maxY = Math.max(extent.maxY, y);
      }
    }
  }
  return extent;
}

function numericColumns(collection: FeatureCollection): string[] {
  const columns = new Set<string>();
  for (const feature of collection.features) {
    if (feature.properties["role"] !== "record") continue;
    for (const [key, value] of Object.entries(feature.properties)) {
      if (key === "timestamp" || key === "role" || key === "segment") continue;
      if (typeof value === "number") columns.add(key);
    }
  }
  return [...columns].sort();
}

export interface MapView {
  svg: SVGSVGElement;
  legend: HTMLElement;
  columnSelect: HTMLSelectElement;
}

function project(extent: Extent, width: number, height: number) {
  const spanX = extent.maxX - extent.minX || 1e-9;
  const spanY = extent.maxY - extent.minY || 1e-9;
  return (x: number, y: number): [number, number] => [
    ((x - extent.minX) / spanX) * width,
    height - ((y - extent.minY) / spanY) * height, // north up
  ];
}

function drawFeatures(svg: SVGSVGElement, collection: FeatureCollection,
                      colorFor: (feature: GeoFeature) => string): void {
  svg.innerHTML = "";
  const extent = extentOf(collection);
  if (extent === null) return;
  const toScreen = project(extent, 800, 600);
  for (const feature of collection.features) {
    if (feature.geometry.type === "Polygon") {
      const points = coordsOf(feature)
        .map(([x, y]) => toScreen(x, y).join(","))
        .join(" ");
      const polygon = document.createElementNS(SVG_NS, "polygon");
      polygon.setAttribute("points", points);
      polygon.setAttribute("class", "boundary");
      polygon.setAttribute("fill", "none");
      polygon.setAttribute("stroke", "#555");
      polygon.dataset.field = String(feature.properties["field"] ?? "");
      svg.appendChild(polygon);
    } else if (feature.geometry.type === "Point") {
      const [x, y] = coordsOf(feature)[0];
      const [sx, sy] = toScreen(x, y);
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(sx));
      circle.setAttribute("cy", String(sy));
      circle.setAttribute("r", "3");
      circle.setAttribute("class", "record");
      circle.setAttribute("fill", colorFor(feature));
      circle.dataset.segment = String(feature.properties["segment"] ?? "");
      svg.appendChild(circle);
    }
  }
}

function segmentColorer(collection: FeatureCollection):
    (feature: GeoFeature) => string {
  const order: string[] = [];
  for (const feature of collection.features) {
    if (feature.properties["role"] === "record") {
      order.push(String(feature.properties["segment"]));
    }
  }
  const colors = labelColors(order);
  return (feature) =>
    colors.get(String(feature.properties["segment"])) ?? TRANSFER_COLOR;
}

function valueColorer(collection: FeatureCollection, column: string):
    (feature: GeoFeature) => string {
  const values: number[] = [];
  for (const feature of collection.features) {
    const value = feature.properties[column];
    if (typeof value === "number") values.push(value);
  }
  const min = Math.min(...values);
  const max = Math.max(...values);
  return (feature) => {
    const value = feature.properties[column];
    if (typeof value !== "number") return TRANSFER_COLOR;
    return rampColor(value, min, max);
  };
}

function renderLegend(legend: HTMLElement, info: RunInfo,
                      collection: FeatureCollection): void {
  legend.innerHTML = "";
  const order: string[] = [];
  for (const feature of collection.features) {
    if (feature.properties["role"] === "record") {
      const label = String(feature.properties["segment"]);
      if (!order.includes(label)) order.push(label);
    }
  }
  const colors = labelColors(order);
  for (const label of Object.keys(info.stats).sort()) {
    const entry = document.createElement("li");
    entry.className = "legend-entry";
    entry.dataset.label = label;
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.backgroundColor = colors.get(label) ?? TRANSFER_COLOR;
    entry.appendChild(swatch);
    const text = document.createElement("span");
    // row count comes verbatim from the run stats, never recounted here
    text.textContent = `${label}: ${info.stats[label]} rows`;
    entry.appendChild(text);
    legend.appendChild(entry);
  }
}

export function renderSeparationMap(container: HTMLElement, info: RunInfo,
                                    collection: FeatureCollection): MapView {
  container.innerHTML = "";
  const wrapper = document.createElement("div");
  wrapper.className = "separation-map";

  const title = document.createElement("h2");
  title.textContent = `Separation ${info.runId} of ${info.sourceSeries}`;
  wrapper.appendChild(title);

  if (collection.features.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "This run produced no positioned records.";
    wrapper.appendChild(empty);
  }

  const svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("viewBox", "0 0 800 600");
  svg.setAttribute("class", "map-canvas");
  wrapper.appendChild(svg);

  const legend = document.createElement("ul");
  legend.className = "legend";
  wrapper.appendChild(legend);

  const selectLabel = document.createElement("label");
  selectLabel.textContent = "Color by ";
  const columnSelect = document.createElement("select");
  columnSelect.className = "column-select";
  const bySegment = document.createElement("option");
  bySegment.value = "";
  bySegment.textContent = "segment";
  columnSelect.appendChild(bySegment);
  for (const column of numericColumns(collection)) {
    const option = document.createElement("option");
    option.value = column;
    option.textContent = column;
    columnSelect.appendChild(option);
  }
  selectLabel.appendChild(columnSelect);
  wrapper.appendChild(selectLabel);

  const repaint = () => {
    const column = columnSelect.value;
    const colorFor = column === ""
      ? segmentColorer(collection)
      : valueColorer(collection, column);
    drawFeatures(svg, collection, colorFor);
  };
  columnSelect.addEventListener("change", repaint);
  repaint();
  renderLegend(legend, info, collection);

  container.appendChild(wrapper);
  return { svg, legend, columnSelect };
}

export function renderRunNotFound(container: HTMLElement,
                                  runId: string): void {
  container.innerHTML = "";
  const message = document.createElement("p");
  message.className = "not-found";
  message.textContent = `No separation run ${runId} exists.`;
  container.appendChild(message);
}
