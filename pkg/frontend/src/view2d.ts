/**
 * SVG rendering for the 2D mode. Consumes dim=2 layout payloads and
 * produces a plain SVG element; node circles carry data-id attributes
 * and click handlers for selection.
 */

import { LABEL_LIMIT, PALETTE } from "./palette.js";
import type { LayoutPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface View2DOptions {
  selected?: string | null;
  highlighted?: ReadonlySet<string>;
  showConceptual?: boolean;
  onSelect?: (acronym: string) => void;
}

function viewBox(payload: LayoutPayload): string {
  let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
  for (const node of payload.nodes) {
    minX = Math.min(minX, node.x);
    maxX = Math.max(maxX, node.x);
    minY = Math.min(minY, node.y);
    maxY = Math.max(maxY, node.y);
  }
  const pad = 20;
  return `${minX - pad} ${minY - pad} ${maxX - minX + 2 * pad} ${maxY - minY + 2 * pad}`;
}

export function renderView2D(doc: Document, payload: LayoutPayload, options: View2DOptions = {}): SVGSVGElement {
  const highlighted = options.highlighted ?? new Set<string>();
  const svg = doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("viewBox", viewBox(payload));
  svg.setAttribute("width", "100%");
  svg.setAttribute("height", "100%");
  svg.setAttribute("data-role", "graph-2d");

  const byId = new Map(payload.nodes.map((n) => [n.id, n]));
  for (const link of payload.links) {
    if (link.kind === "conceptual" && options.showConceptual === false) continue;
    const a = byId.get(link.source)!;
    const b = byId.get(link.target)!;
    const line = doc.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(a.x));
    line.setAttribute("y1", String(a.y));
    line.setAttribute("x2", String(b.x));
    line.setAttribute("y2", String(b.y));
    line.setAttribute("stroke", PALETTE.edge);
    line.setAttribute("stroke-width", "1");
    if (link.kind === "conceptual") line.setAttribute("stroke-dasharray", "6 4");
    line.setAttribute("class", `link ${link.kind}`);
    svg.appendChild(line);
  }

  const drawLabels = payload.nodes.length <= LABEL_LIMIT;
  for (const node of payload.nodes) {
    const circle = doc.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(node.x));
    circle.setAttribute("cy", String(node.y));
    circle.setAttribute("r", "6");
    circle.setAttribute("fill", node.flag ? PALETTE.flagged : PALETTE.node);
    circle.setAttribute("class", "node" + (highlighted.has(node.id) ? " hit" : ""));
    circle.setAttribute("data-id", node.id);
    if (highlighted.has(node.id)) {
      circle.setAttribute("stroke", PALETTE.highlight);
      circle.setAttribute("stroke-width", "3");
    } else if (node.id === options.selected) {
      circle.setAttribute("stroke", PALETTE.selected);
      circle.setAttribute("stroke-width", "2.5");
    }
    circle.addEventListener("click", () => options.onSelect?.(node.id));
    const tooltip = doc.createElementNS(SVG_NS, "title");
    tooltip.textContent = `${node.id}: ${node.name}`;
    circle.appendChild(tooltip);
    svg.appendChild(circle);

    if (drawLabels) {
      const label = doc.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(node.x + 8));
      label.setAttribute("y", String(node.y - 8));
      label.setAttribute("font-size", "9");
      label.setAttribute("class", "node-label");
      label.textContent = node.id;
      svg.appendChild(label);
    }
  }

  return svg;
}
