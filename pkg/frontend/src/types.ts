// JSON shapes exchanged with the platform HTTP API. Field names and
// ordering follow the server exactly; the client never reorders them.

export interface PropertyDef {
  propertyIri: string;
  label: string;
  range: string; // datatype name or class IRI
  cardinality: string;
  csvColumn: string | null;
}

export interface ConceptClass {
  classIri: string;
  label: string;
  parentClass: string | null;
  properties: PropertyDef[];
}

export interface FormatComment {
  author: string;
  timestamp: string;
  body: string;
}

export interface FormatDefinition {
  formatIri: string;
  label: string;
  version: number;
  status: "draft" | "final";
  classes: ConceptClass[];
  comments: FormatComment[];
}

export interface FormatRow {
  formatIri: string;
  label: string;
  status: string;
  version: number;
}

export interface GeoFeature {
  type: "Feature";
  properties: Record<string, unknown>;
  geometry: { type: string; coordinates: unknown };
}

export interface FeatureCollection {
  type: "FeatureCollection";
  features: GeoFeature[];
}

export interface RunInfo {
  runId: string;
  sourceSeries: string;
  stats: Record<string, number>;
}
