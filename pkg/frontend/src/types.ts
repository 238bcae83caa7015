/**
 * Wire payload types for the methodgraph service, plus a structural
 * validator for the layout payload. Rendering is all-or-nothing: a
 * payload that fails validation must not reach the scene builders.
 */

export type EdgeKind = "direct" | "conceptual";

/** One method record as served by the API (the ten table columns). */
export interface MethodRecord {
  title: string;
  url: string;
  authors: string[];
  release_date: string;
  venue: string;
  method_name: string;
  subject_area: string;
  acronym: string;
  description: string;
  /** Based-on acronyms; a leading "~" marks a conceptual reference. */
  based_on: string[];
}

export const RECORD_FIELDS: ReadonlyArray<keyof MethodRecord> = [
  "title",
  "url",
  "authors",
  "release_date",
  "venue",
  "method_name",
  "subject_area",
  "acronym",
  "description",
  "based_on",
];

export interface GraphNode {
  id: string;
  name: string;
  area: string;
  flag: boolean;
}

export interface LayoutNode extends GraphNode {
  x: number;
  y: number;
  z?: number;
}

export interface GraphLink {
  source: string;
  target: string;
  kind: EdgeKind;
}

export interface LayoutPayload {
  nodes: LayoutNode[];
  links: GraphLink[];
  stale?: string[];
}

export interface GraphPayload {
  snapshot_id: number;
  nodes: GraphNode[];
  links: GraphLink[];
}

export interface AreaGraphPayload {
  area: string;
  nodes: GraphNode[];
  links: GraphLink[];
}

export interface NeighborRef {
  acronym: string;
  kind: EdgeKind;
}

export interface MethodDocument {
  record: MethodRecord;
  bases: NeighborRef[];
  users: NeighborRef[];
}

export interface ValidationIssue {
  severity: "error" | "warning";
  code: string;
  subject: string | number;
  detail: string;
}

export interface Submission {
  record: MethodRecord;
  submitter: string;
  submitted_at: string;
  status: "accepted" | "rejected";
  issues: ValidationIssue[];
}

export type ValidatedLayout =
  | { ok: true; value: LayoutPayload; dimensions: 2 | 3 }
  | { ok: false; error: string };

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function checkNode(value: unknown, index: number): string | null {
  if (!isRecord(value)) return `node ${index} is not an object`;
  if (typeof value.id !== "string" || value.id === "") return `node ${index} has no id`;
  if (typeof value.name !== "string") return `node ${value.id}: name missing`;
  if (typeof value.area !== "string") return `node ${value.id}: area missing`;
  if (typeof value.flag !== "boolean") return `node ${value.id}: flag missing`;
  if (!isFiniteNumber(value.x) || !isFiniteNumber(value.y)) {
    return `node ${value.id}: non-finite coordinates`;
  }
  if ("z" in value && !isFiniteNumber(value.z)) {
    return `node ${value.id}: non-finite z`;
  }
  return null;
}

/**
 * Validate a /api/layout response body. Checks field shapes, that the
 * coordinate dimensionality is uniform, and that every link endpoint
 * names a node in the payload.
 */
export function validateLayoutPayload(value: unknown): ValidatedLayout {
  if (!isRecord(value)) return { ok: false, error: "payload is not an object" };
  if (!Array.isArray(value.nodes)) return { ok: false, error: "nodes is not an array" };
  if (!Array.isArray(value.links)) return { ok: false, error: "links is not an array" };

  const ids = new Set<string>();
  let withZ = 0;
  for (let i = 0; i < value.nodes.length; i++) {
    const problem = checkNode(value.nodes[i], i);
    if (problem) return { ok: false, error: problem };
    const node = value.nodes[i] as LayoutNode;
    if (ids.has(node.id)) return { ok: false, error: `duplicate node id ${node.id}` };
    ids.add(node.id);
    if (node.z !== undefined) withZ++;
  }
  if (withZ !== 0 && withZ !== value.nodes.length) {
    return { ok: false, error: "mixed 2D and 3D coordinates" };
  }

  for (const link of value.links) {
    if (!isRecord(link)) return { ok: false, error: "link is not an object" };
    if (link.kind !== "direct" && link.kind !== "conceptual") {
      return { ok: false, error: `unknown link kind ${String(link.kind)}` };
    }
    for (const end of [link.source, link.target]) {
      if (typeof end !== "string" || !ids.has(end)) {
        return { ok: false, error: `link endpoint ${String(end)} is not a node` };
      }
    }
  }

  if (value.stale !== undefined) {
    if (!Array.isArray(value.stale) || value.stale.some((s) => typeof s !== "string")) {
      return { ok: false, error: "stale is not a list of acronyms" };
    }
  }

  const dimensions = withZ > 0 ? 3 : 2;
  return { ok: true, value: value as unknown as LayoutPayload, dimensions };
}
