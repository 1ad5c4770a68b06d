// Hash-routed single-page shell: #/formats, #/formats/<iri>, #/runs/<id>.
// A pure API client; the server computes, this renders.

import { ApiClient, ApiFailure } from "./api.js";
import { loadFormatList } from "./formatList.js";
import { renderFormatDetail } from "./formatEditor.js";
import { renderRunNotFound, renderSeparationMap } from "./map.js";

function client(): ApiClient {
  const token = window.localStorage.getItem("agrihub-token");
  return new ApiClient(window.location.origin, token);
}

async function showFormat(container: HTMLElement, formatIri: string):
    Promise<void> {
  const api = client();
  try {
    const definition = await api.getFormat(formatIri);
    renderFormatDetail(container, definition, api,
                       () => void showFormat(container, formatIri));
  } catch (err) {
    if (err instanceof ApiFailure && err.status === 404) {
      container.innerHTML = "";
      const message = document.createElement("p");
      message.className = "not-found";
      message.textContent = `Unknown format ${formatIri}.`;
      container.appendChild(message);
      return;
    }
    throw err;
  }
}

async function showRun(container: HTMLElement, runId: string): Promise<void> {
  const api = client();
  try {
    const info = await api.runInfo(runId);
    const geojson = await api.runGeojson(runId);
    renderSeparationMap(container, info, geojson);
  } catch (err) {
    if (err instanceof ApiFailure && err.status === 404) {
      renderRunNotFound(container, runId);
      return;
    }
    throw err;
  }
}

export async function route(container: HTMLElement, hash: string):
    Promise<void> {
  const parts = hash.replace(/^#\/?/, "").split("/");
  if (parts[0] === "formats" && parts.length > 1) {
    await showFormat(container, decodeURIComponent(parts.slice(1).join("/")));
  } else if (parts[0] === "runs" && parts.length === 2) {
    await showRun(container, parts[1]);
  } else {
    await loadFormatList(client(), container, (formatIri) => {
      window.location.hash = `#/formats/${encodeURIComponent(formatIri)}`;
    });
  }
}

export function start(): void {
  const container = document.getElementById("app");
  if (!container) throw new Error("no #app element");
  const rerender = () => void route(container, window.location.hash);
  window.addEventListener("hashchange", rerender);

  const tokenInput = document.getElementById("token") as HTMLInputElement;
  if (tokenInput) {
    tokenInput.value = window.localStorage.getItem("agrihub-token") ?? "";
    tokenInput.addEventListener("change", () => {
      window.localStorage.setItem("agrihub-token", tokenInput.value);
      rerender();
    });
  }
  rerender();
}

if (typeof window !== "undefined" && "document" in globalThis &&
    document.getElementById("app")) {
  start();
}
