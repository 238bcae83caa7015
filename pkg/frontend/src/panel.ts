/**
 * Metadata side panel: all ten record fields plus direct bases and
 * users as navigation chips.
 */

import type { MethodDocument, NeighborRef } from "./types.js";

export interface PanelHandlers {
  onNavigate: (acronym: string) => void;
  onClose: () => void;
}

const FIELD_LABELS: ReadonlyArray<[field: string, label: string]> = [
  ["title", "Paper title"],
  ["url", "Link"],
  ["authors", "Authors"],
  ["release_date", "Release date"],
  ["venue", "Published at"],
  ["method_name", "Method name"],
  ["subject_area", "Subject area"],
  ["acronym", "Acronym"],
  ["description", "Description"],
  ["based_on", "Based on"],
];

function chip(doc: Document, ref: NeighborRef, onNavigate: (a: string) => void): HTMLElement {
  const button = doc.createElement("button");
  button.type = "button";
  button.className = `chip chip-${ref.kind}`;
  button.dataset.acronym = ref.acronym;
  button.textContent = ref.acronym;
  button.title = ref.kind === "conceptual" ? "conceptual reference" : "direct base";
  button.addEventListener("click", () => onNavigate(ref.acronym));
  return button;
}

export function renderPanel(
  doc: Document,
  document_: MethodDocument,
  handlers: PanelHandlers,
): HTMLElement {
  const record = document_.record;
  const aside = doc.createElement("aside");
  aside.className = "panel";
  aside.dataset.acronym = record.acronym;

  const header = doc.createElement("header");
  const heading = doc.createElement("h2");
  heading.textContent = record.acronym;
  const close = doc.createElement("button");
  close.type = "button";
  close.className = "panel-close";
  close.textContent = "×";
  close.addEventListener("click", handlers.onClose);
  header.append(heading, close);
  aside.appendChild(header);

  const list = doc.createElement("dl");
  for (const [field, label] of FIELD_LABELS) {
    const term = doc.createElement("dt");
    term.textContent = label;
    const value = doc.createElement("dd");
    value.dataset.field = field;
    switch (field) {
      case "title": {
        const anchor = doc.createElement("a");
        anchor.href = record.url;
        anchor.target = "_blank";
        anchor.rel = "noopener";
        anchor.textContent = record.title;
        value.appendChild(anchor);
        break;
      }
      case "url": {
        const anchor = doc.createElement("a");
        anchor.href = record.url;
        anchor.target = "_blank";
        anchor.rel = "noopener";
        anchor.textContent = record.url;
        value.appendChild(anchor);
        break;
      }
      case "authors":
        value.textContent = record.authors.join("; ");
        break;
      case "based_on":
        if (document_.bases.length === 0) {
          value.textContent = "nothing recorded";
        } else {
          for (const ref of document_.bases) {
            value.appendChild(chip(doc, ref, handlers.onNavigate));
          }
        }
        break;
      default:
        value.textContent = String(record[field as keyof typeof record]);
    }
    list.append(term, value);
  }
  aside.appendChild(list);

  const usersHeading = doc.createElement("h3");
  usersHeading.textContent = "Used by";
  aside.appendChild(usersHeading);
  const users = doc.createElement("div");
  users.className = "panel-users";
  if (document_.users.length === 0) {
    users.textContent = "no methods build on this one yet";
  } else {
    for (const ref of document_.users) {
      users.appendChild(chip(doc, ref, handlers.onNavigate));
    }
  }
  aside.appendChild(users);

  return aside;
}
