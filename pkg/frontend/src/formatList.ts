// Format index page: one row per registry entry with a status badge.

import { ApiClient, ApiFailure } from "./api.js";
import type { FormatRow } from "./types.js";

export function renderFormatList(container: HTMLElement, rows: FormatRow[],
                                 onOpen: (formatIri: string) => void): void {
  container.innerHTML = "";
  if (rows.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent =
      "No formats registered yet. Import a draft to get started.";
    container.appendChild(empty);
    return;
  }
  const table = document.createElement("table");
  table.className = "format-list";
  const head = table.createTHead().insertRow();
  for (const title of ["Format", "Label", "Status", "Version"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const row of rows) {
    const tr = body.insertRow();
    tr.className = "format-row";
    tr.dataset.formatIri = row.formatIri;
    const link = document.createElement("a");
    link.href = `#/formats/${encodeURIComponent(row.formatIri)}`;
    link.textContent = row.formatIri;
    link.addEventListener("click", (event) => {
      event.preventDefault();
      onOpen(row.formatIri);
    });
    tr.insertCell().appendChild(link);
    tr.insertCell().textContent = row.label;
    const badge = document.createElement("span");
    badge.className = `badge badge-${row.status}`;
    badge.textContent = row.status;
    tr.insertCell().appendChild(badge);
    tr.insertCell().textContent = String(row.version);
  }
  container.appendChild(table);
}

export function renderErrorBanner(container: HTMLElement, failure: ApiFailure,
                                  onRetry: () => void): void {
  container.innerHTML = ""; // never leave a partial render behind
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.textContent = `Could not reach the platform (${failure.code}: ` +
    `${failure.detail}). `;
  const retry = document.createElement("button");
  retry.textContent = "Retry";
  retry.addEventListener("click", onRetry);
  banner.appendChild(retry);
  container.appendChild(banner);
}

export async function loadFormatList(
    client: ApiClient, container: HTMLElement,
    onOpen: (formatIri: string) => void): Promise<void> {
  try {
    const rows = await client.listFormats();
    renderFormatList(container, rows, onOpen);
  } catch (err) {
    if (err instanceof ApiFailure) {
      renderErrorBanner(container, err,
                        () => loadFormatList(client, container, onOpen));
      return;
    }
    throw err;
  }
}
