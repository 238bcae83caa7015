/**
 * Typed client for the methodgraph HTTP API.
 *
 * One request may be in flight per endpoint key: starting a new request
 * aborts the previous one, so a stale response can never overwrite a
 * newer one (latest wins). Aborted calls reject with an AbortError.
 */

import type {
  AreaGraphPayload,
  GraphPayload,
  MethodDocument,
  MethodRecord,
  Submission,
  ValidationIssue,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: string;
  /** Present on rejected submissions (422). */
  readonly submission?: Submission;
  /** Present when a body was rejected before reaching validation. */
  readonly issues?: ValidationIssue[];

  constructor(status: number, body: unknown) {
    const envelope = (body ?? {}) as {
      error?: { code?: string; detail?: string };
      submission?: Submission;
      issues?: ValidationIssue[];
    };
    const code = envelope.error?.code ?? "http_error";
    const detail = envelope.error?.detail ?? `request failed with status ${status}`;
    super(`${code}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
    this.detail = detail;
    this.submission = envelope.submission;
    this.issues = envelope.issues;
  }
}

export function isAbortError(error: unknown): boolean {
  return error instanceof Error && error.name === "AbortError";
}

export interface LayoutQuery {
  dim: 2 | 3;
  seed?: number;
  area?: string;
  collection?: string;
}

/** What the app needs from a backend; ApiClient is the real one. */
export interface GraphApi {
  health(): Promise<{ status: string; snapshot_id: number; nodes: number; edges: number }>;
  layout(query: LayoutQuery): Promise<unknown>;
  graph(includeConceptual?: boolean): Promise<GraphPayload>;
  method(acronym: string): Promise<MethodDocument>;
  areas(): Promise<string[]>;
  areaGraph(area: string): Promise<AreaGraphPayload>;
  search(q: string, limit?: number): Promise<MethodRecord[]>;
  submit(record: Partial<MethodRecord>, submitter: string): Promise<Submission>;
}

export class ApiClient implements GraphApi {
  private readonly base: string;
  private readonly fetchFn: typeof fetch;
  private readonly inflight = new Map<string, AbortController>();

  constructor(base = "", fetchFn: typeof fetch = globalThis.fetch) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request<T>(key: string, path: string, init?: RequestInit): Promise<T> {
    this.inflight.get(key)?.abort();
    const controller = new AbortController();
    this.inflight.set(key, controller);
    try {
      const response = await this.fetchFn(this.base + path, {
        ...init,
        signal: controller.signal,
      });
      const text = await response.text();
      let body: unknown = null;
      if (text !== "") {
        try {
          body = JSON.parse(text);
        } catch {
          body = null; // non-JSON error pages still become typed errors
        }
      }
      if (!response.ok) throw new ApiError(response.status, body);
      return body as T;
    } finally {
      if (this.inflight.get(key) === controller) this.inflight.delete(key);
    }
  }

  health() {
    return this.request<{ status: string; snapshot_id: number; nodes: number; edges: number }>(
      "health",
      "/api/health",
    );
  }

  layout(query: LayoutQuery): Promise<unknown> {
    const params = new URLSearchParams({ dim: String(query.dim) });
    if (query.seed !== undefined) params.set("seed", String(query.seed));
    if (query.area !== undefined) params.set("area", query.area);
    if (query.collection !== undefined) params.set("collection", query.collection);
    return this.request("layout", `/api/layout?${params}`);
  }

  graph(includeConceptual = false): Promise<GraphPayload> {
    const suffix = includeConceptual ? "?include_conceptual=true" : "";
    return this.request("graph", `/api/graph${suffix}`);
  }

  method(acronym: string): Promise<MethodDocument> {
    return this.request("method", `/api/methods/${encodeURIComponent(acronym)}`);
  }

  areas(): Promise<string[]> {
    return this.request("areas", "/api/areas");
  }

  areaGraph(area: string): Promise<AreaGraphPayload> {
    return this.request("area-graph", `/api/areas/${encodeURIComponent(area)}/graph`);
  }

  search(q: string, limit = 10): Promise<MethodRecord[]> {
    const params = new URLSearchParams({ q, limit: String(limit) });
    return this.request("search", `/api/search?${params}`);
  }

  submit(record: Partial<MethodRecord>, submitter: string): Promise<Submission> {
    return this.request("submit", "/api/submissions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ record, submitter }),
    });
  }
}
