// Thin typed client over the platform's HTTP API. All data shown in the UI
// comes verbatim from these responses; the UI adds no numbers of its own.

import type {
  FeatureCollection,
  FormatDefinition,
  FormatRow,
  RunInfo,
} from "./types.js";

export class ApiFailure extends Error {
  readonly code: string;
  readonly detail: string;
  readonly status: number;

  constructor(status: number, code: string, detail: string) {
    super(`${code}: ${detail}`);
    this.status = status;
    this.code = code;
    this.detail = detail;
  }
}

export type FetchFn = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly token: string | null;
  private readonly fetchFn: FetchFn;

  constructor(base: string, token: string | null = null, fetchFn?: FetchFn) {
    this.base = base.replace(/\/$/, "");
    this.token = token;
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(method: string, path: string, body?: unknown):
      Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiFailure(0, "network", String(err));
    }
    if (!response.ok) {
      let code = "http-error";
      let detail = `${response.status}`;
      try {
        const payload = await response.json();
        if (payload && typeof payload.error === "string") {
          code = payload.error;
          detail = String(payload.detail ?? "");
        } else if (payload && payload.detail) {
          detail = JSON.stringify(payload.detail);
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiFailure(response.status, code, detail);
    }
    return (await response.json()) as T;
  }

  listFormats(status?: string): Promise<FormatRow[]> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    return this.request("GET", `/formats${query}`);
  }

  getFormat(formatIri: string): Promise<FormatDefinition> {
    return this.request("GET", `/formats/${encodeURIComponent(formatIri)}`);
  }

  createDraft(definition: FormatDefinition): Promise<{ formatIri: string }> {
    return this.request("POST", "/formats", definition);
  }

  finalizeFormat(formatIri: string):
      Promise<{ formatIri: string; version: number }> {
    return this.request(
      "POST", `/formats/${encodeURIComponent(formatIri)}/finalize`);
  }

  addComment(formatIri: string, author: string, timestamp: string,
             body: string): Promise<{ comments: number }> {
    return this.request(
      "POST", `/formats/${encodeURIComponent(formatIri)}/comments`,
      { author, timestamp, body });
  }

  runInfo(runId: string): Promise<RunInfo> {
    return this.request("GET", `/separation/${encodeURIComponent(runId)}`);
  }

  runGeojson(runId: string): Promise<FeatureCollection> {
    return this.request(
      "GET", `/separation/${encodeURIComponent(runId)}/geojson`);
  }
}
