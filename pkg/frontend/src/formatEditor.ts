// Format detail page: read-only view for finalized vocabularies, an
// editable form for drafts. Property rows mirror the API definition
// exactly; finalize validation errors attach inline to the offending
// field; everything else surfaces verbatim in the banner.

import { ApiClient, ApiFailure } from "./api.js";
import type { ConceptClass, FormatDefinition, PropertyDef } from "./types.js";

const CARDINALITIES = ["required-one", "optional-one", "many"];
const DATATYPES = ["string", "integer", "decimal", "boolean", "datetime",
                   "geometry"];

function input(name: string, value: string, readOnly: boolean):
    HTMLInputElement {
  const element = document.createElement("input");
  element.name = name;
  element.value = value;
  element.readOnly = readOnly;
  return element;
}

function propertyRow(prop: PropertyDef, readOnly: boolean):
    HTMLTableRowElement {
  const tr = document.createElement("tr");
  tr.className = "property-row";
  tr.insertCell().appendChild(input("propertyIri", prop.propertyIri, readOnly));
  tr.insertCell().appendChild(input("propLabel", prop.label, readOnly));
  tr.insertCell().appendChild(input("range", prop.range, readOnly));
  const cardCell = tr.insertCell();
  const select = document.createElement("select");
  select.name = "cardinality";
  for (const option of CARDINALITIES) {
    const opt = document.createElement("option");
    opt.value = option;
    opt.textContent = option;
    opt.selected = option === prop.cardinality;
    select.appendChild(opt);
  }
  select.disabled = readOnly;
  cardCell.appendChild(select);
  tr.insertCell().appendChild(
    input("csvColumn", prop.csvColumn ?? "", readOnly));
  return tr;
}

function classSection(cls: ConceptClass, readOnly: boolean): HTMLElement {
  const section = document.createElement("section");
  section.className = "class-editor";
  const head = document.createElement("div");
  head.className = "class-head";
  head.appendChild(input("classIri", cls.classIri, readOnly));
  head.appendChild(input("classLabel", cls.label, readOnly));
  head.appendChild(input("parentClass", cls.parentClass ?? "", readOnly));
  section.appendChild(head);

  const table = document.createElement("table");
  table.className = "property-table";
  const header = table.createTHead().insertRow();
  for (const title of ["Property", "Label", "Range", "Cardinality",
                       "CSV column"]) {
    const th = document.createElement("th");
    th.textContent = title;
    header.appendChild(th);
  }
  const body = table.createTBody();
  for (const prop of cls.properties) {
    body.appendChild(propertyRow(prop, readOnly));
  }
  section.appendChild(table);

  if (!readOnly) {
    const add = document.createElement("button");
    add.type = "button";
    add.className = "add-property";
    add.textContent = "Add property";
    add.addEventListener("click", () => {
      body.appendChild(propertyRow(
        { propertyIri: "", label: "", range: "string",
          cardinality: "optional-one", csvColumn: null }, false));
    });
    section.appendChild(add);
  }
  return section;
}

/** Rebuild the definition JSON from the DOM; inverse of the renderer. */
export function formStateFrom(root: HTMLElement): FormatDefinition {
  const value = (scope: Element, name: string): string =>
    (scope.querySelector(`[name="${name}"]`) as HTMLInputElement).value;
  const classes: ConceptClass[] = [];
  for (const section of root.querySelectorAll(".class-editor")) {
    const properties: PropertyDef[] = [];
    for (const row of section.querySelectorAll(".property-row")) {
      const csv = value(row, "csvColumn");
      properties.push({
        propertyIri: value(row, "propertyIri"),
        label: value(row, "propLabel"),
        range: value(row, "range"),
        cardinality:
          (row.querySelector('[name="cardinality"]') as HTMLSelectElement)
            .value,
        csvColumn: csv === "" ? null : csv,
      });
    }
    const parent = value(section, "parentClass");
    classes.push({
      classIri: value(section, "classIri"),
      label: value(section, "classLabel"),
      parentClass: parent === "" ? null : parent,
      properties,
    });
  }
  return {
    formatIri: value(root, "formatIri"),
    label: value(root, "label"),
    version: Number(root.dataset.version ?? "1"),
    status: (root.dataset.status ?? "draft") as "draft" | "final",
    classes,
    comments: [],
  };
}

function banner(root: HTMLElement, text: string): void {
  const area = root.querySelector(".banner-area") as HTMLElement;
  area.innerHTML = "";
  const div = document.createElement("div");
  div.className = "error-banner";
  div.textContent = text;
  area.appendChild(div);
}

function clearFieldErrors(root: HTMLElement): void {
  for (const span of root.querySelectorAll(".field-error")) span.remove();
  (root.querySelector(".banner-area") as HTMLElement).innerHTML = "";
}

/** Attach the failure next to every field whose value is a named dangling
 * IRI; anything unmatched lands in the banner verbatim. */
export function showFinalizeFailure(root: HTMLElement,
                                    failure: ApiFailure): void {
  clearFieldErrors(root);
  const marker = "unresolved references: ";
  const at = failure.detail.indexOf(marker);
  let attached = 0;
  if (at >= 0) {
    const iris = failure.detail.slice(at + marker.length).split(", ");
    for (const iri of iris) {
      for (const field of root.querySelectorAll(
          '[name="range"], [name="parentClass"]')) {
        if ((field as HTMLInputElement).value === iri) {
          const note = document.createElement("span");
          note.className = "field-error";
          note.textContent = `unresolved reference: ${iri}`;
          field.insertAdjacentElement("afterend", note);
          attached += 1;
        }
      }
    }
  }
  if (attached === 0) {
    banner(root, `${failure.code}: ${failure.detail}`);
  }
}

export function renderFormatDetail(container: HTMLElement,
                                   definition: FormatDefinition,
                                   client: ApiClient,
                                   reload: () => void): void {
  container.innerHTML = "";
  const root = document.createElement("div");
  root.className = "format-detail";
  root.dataset.version = String(definition.version);
  root.dataset.status = definition.status;
  const readOnly = definition.status === "final";

  const head = document.createElement("header");
  const title = document.createElement("h2");
  title.textContent = definition.label || definition.formatIri;
  head.appendChild(title);
  const badge = document.createElement("span");
  badge.className = `badge badge-${definition.status}`;
  badge.textContent = definition.status;
  head.appendChild(badge);
  const version = document.createElement("span");
  version.className = "version";
  version.textContent = `v${definition.version}`;
  head.appendChild(version);
  root.appendChild(head);

  const bannerArea = document.createElement("div");
  bannerArea.className = "banner-area";
  root.appendChild(bannerArea);

  const form = document.createElement("form");
  form.className = "format-form";
  form.addEventListener("submit", (event) => event.preventDefault());
  form.appendChild(input("formatIri", definition.formatIri, true));
  form.appendChild(input("label", definition.label, readOnly));
  for (const cls of definition.classes) {
    form.appendChild(classSection(cls, readOnly));
  }

  if (!readOnly) {
    const addClass = document.createElement("button");
    addClass.type = "button";
    addClass.className = "add-class";
    addClass.textContent = "Add class";
    addClass.addEventListener("click", () => {
      form.insertBefore(
        classSection({ classIri: "", label: "", parentClass: null,
                       properties: [] }, false),
        addClass);
    });
    form.appendChild(addClass);

    const save = document.createElement("button");
    save.type = "button";
    save.className = "save-draft";
    save.textContent = "Save draft";
    save.addEventListener("click", async () => {
      clearFieldErrors(root);
      try {
        await client.createDraft(formStateFrom(root));
        reload();
      } catch (err) {
        if (err instanceof ApiFailure) banner(root, `${err.code}: ${err.detail}`);
        else throw err;
      }
    });
    form.appendChild(save);

    const finalize = document.createElement("button");
    finalize.type = "button";
    finalize.className = "finalize";
    finalize.textContent = "Finalize";
    finalize.addEventListener("click", async () => {
      clearFieldErrors(root);
      try {
        await client.finalizeFormat(definition.formatIri);
        reload();
      } catch (err) {
        if (err instanceof ApiFailure) showFinalizeFailure(root, err);
        else throw err;
      }
    });
    form.appendChild(finalize);
  }
  root.appendChild(form);

  const comments = document.createElement("section");
  comments.className = "comments";
  const commentsTitle = document.createElement("h3");
  commentsTitle.textContent = `Discussion (${definition.comments.length})`;
  comments.appendChild(commentsTitle);
  for (const comment of definition.comments) {
    const entry = document.createElement("p");
    entry.className = "comment";
    entry.textContent = `${comment.author} @ ${comment.timestamp}: ` +
      comment.body;
    comments.appendChild(entry);
  }
  const commentBox = document.createElement("textarea");
  commentBox.className = "comment-body";
  comments.appendChild(commentBox);
  const commentAuthor = input("commentAuthor", "", false);
  comments.appendChild(commentAuthor);
  const post = document.createElement("button");
  post.type = "button";
  post.className = "post-comment";
  post.textContent = "Post comment";
  post.addEventListener("click", async () => {
    try {
      await client.addComment(
        definition.formatIri, commentAuthor.value,
        new Date().toISOString().replace(/(\.\d{3})\d*Z$/, "$1Z"),
        commentBox.value);
      reload();
    } catch (err) {
      if (err instanceof ApiFailure) banner(root, `${err.code}: ${err.detail}`);
      else throw err;
    }
  });
  comments.appendChild(post);
  root.appendChild(comments);

  container.appendChild(root);
}
