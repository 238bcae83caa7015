/**
 * The client application: owns the view state, fetches payloads, and
 * renders the whole screen as a function of (payloads, state).
 *
 * Rendering side effects stay inside the passed Document, so the app
 * runs unchanged under a real browser or DOM emulation. The 3D mode
 * builds a THREE scene graph and hands it to `onSceneChange`; the
 * WebGL canvas itself belongs to the bootstrap layer.
 */

import { ApiError, isAbortError, type GraphApi } from "./api.js";
import { renderPanel } from "./panel.js";
import { buildGraphScene, type SceneBundle } from "./scene3d.js";
import { initialViewState, withSelection, type ViewMode, type ViewState } from "./state.js";
import {
  RECORD_FIELDS,
  validateLayoutPayload,
  type AreaGraphPayload,
  type LayoutPayload,
  type MethodDocument,
  type MethodRecord,
  type ValidationIssue,
} from "./types.js";
import { renderView2D } from "./view2d.js";

export interface AppOptions {
  mode?: ViewMode;
  /** Layout seed; fixed so reloads reproduce the same picture. */
  seed?: number;
}

interface FormOutcome {
  status: string;
  issues: ValidationIssue[];
}

export function issueLine(issue: ValidationIssue): string {
  return `[${issue.severity}] ${issue.code} (${issue.subject}): ${issue.detail}`;
}

export class App {
  readonly state: ViewState;
  onSceneChange: ((bundle: SceneBundle | null) => void) | null = null;

  private readonly doc: Document;
  private readonly root: HTMLElement;
  private readonly api: GraphApi;
  private readonly seed: number;

  private layout: LayoutPayload | null = null;
  private areaGraph: AreaGraphPayload | null = null;
  private methodDoc: MethodDocument | null = null;
  private areaNames: string[] = [];
  private searchHits: string[] = [];
  private banner: string | null = null;
  private formOutcome: FormOutcome | null = null;
  private scene: SceneBundle | null = null;
  private focus: { x: number; y: number; z: number } | null = null;
  private pending: Promise<void> = Promise.resolve();

  constructor(doc: Document, root: HTMLElement, api: GraphApi, options: AppOptions = {}) {
    this.doc = doc;
    this.root = root;
    this.api = api;
    this.seed = options.seed ?? 0;
    this.state = initialViewState(options.mode ?? "3D");
    this.buildChrome();
  }

  /** Resolves once every interaction started so far has settled. */
  idle(): Promise<void> {
    return this.pending;
  }

  currentScene(): SceneBundle | null {
    return this.scene;
  }

  /** Where the camera should look: the top search hit, else the origin. */
  focusPoint(): { x: number; y: number; z: number } | null {
    return this.focus;
  }

  async init(): Promise<void> {
    try {
      this.areaNames = await this.api.areas();
    } catch (error) {
      if (!isAbortError(error)) this.banner = describe(error);
    }
    this.fillAreaOptions();
    await this.refreshLayout();
  }

  // -- interactions ----------------------------------------------------

  async selectNode(acronym: string): Promise<void> {
    const ids = this.loadedIds();
    const next = withSelection(this.state, acronym, ids);
    if (next.selected !== acronym) return; // not in the loaded graph
    try {
      this.methodDoc = await this.api.method(acronym);
    } catch (error) {
      if (isAbortError(error)) return;
      this.banner = describe(error);
      this.render();
      return;
    }
    this.state.selected = acronym;
    this.render();
  }

  clearSelection(): void {
    this.state.selected = null;
    this.methodDoc = null;
    this.render();
  }

  async setMode(mode: ViewMode): Promise<void> {
    if (this.state.mode === mode) return;
    this.state.mode = mode;
    await this.refreshLayout();
  }

  async setArea(area: string | null): Promise<void> {
    this.state.activeArea = area;
    await this.refreshLayout();
  }

  setConceptual(show: boolean): void {
    this.state.includeConceptual = show;
    this.render();
  }

  async runSearch(query: string): Promise<void> {
    this.state.searchQuery = query;
    if (query.trim() === "") {
      this.searchHits = [];
      this.focus = null;
      this.render();
      return;
    }
    try {
      const records = await this.api.search(query.trim());
      this.searchHits = records.map((r) => r.acronym);
    } catch (error) {
      if (isAbortError(error)) return;
      this.searchHits = [];
      this.banner = describe(error);
    }
    this.focus = null;
    const top = this.searchHits.find((hit) => this.loadedIds().has(hit));
    if (top && this.layout) {
      const node = this.layout.nodes.find((n) => n.id === top)!;
      this.focus = { x: node.x, y: node.y, z: node.z ?? 0 };
    }
    this.render();
  }

  async submitForm(values: Record<string, string>): Promise<void> {
    const record: Partial<MethodRecord> = {
      title: values.title ?? "",
      url: values.url ?? "",
      authors: splitList(values.authors ?? "", ";"),
      release_date: values.release_date ?? "",
      venue: values.venue ?? "",
      method_name: values.method_name ?? "",
      subject_area: values.subject_area ?? "",
      acronym: values.acronym ?? "",
      description: values.description ?? "",
      based_on: splitList(values.based_on ?? "", ","),
    };
    try {
      const submission = await this.api.submit(record, values.submitter ?? "");
      this.formOutcome = {
        status: `accepted: ${submission.record.acronym} is now in the graph`,
        issues: submission.issues,
      };
      this.areaNames = await this.api.areas();
      this.fillAreaOptions();
      await this.refreshLayout();
    } catch (error) {
      if (isAbortError(error)) return;
      if (error instanceof ApiError) {
        this.formOutcome = {
          status: error.submission ? `rejected: ${error.detail}` : error.detail,
          issues: error.submission?.issues ?? error.issues ?? [],
        };
        this.render();
      } else {
        throw error;
      }
    }
  }

  // -- data flow -------------------------------------------------------

  private loadedIds(): Set<string> {
    return new Set(this.layout?.nodes.map((n) => n.id) ?? []);
  }

  private async refreshLayout(): Promise<void> {
    const query = {
      dim: (this.state.mode === "2D" ? 2 : 3) as 2 | 3,
      seed: this.seed,
      ...(this.state.activeArea !== null ? { area: this.state.activeArea } : {}),
    };
    let raw: unknown;
    try {
      if (this.state.activeArea !== null) {
        this.areaGraph = await this.api.areaGraph(this.state.activeArea);
      } else {
        this.areaGraph = null;
      }
      raw = await this.api.layout(query);
    } catch (error) {
      if (isAbortError(error)) return;
      this.banner = describe(error);
      this.layout = null;
      this.render();
      return;
    }
    const checked = validateLayoutPayload(raw);
    if (!checked.ok) {
      // all-or-nothing: a payload that fails the wire schema renders nothing
      this.banner = `bad layout payload: ${checked.error}`;
      this.layout = null;
      this.render();
      return;
    }
    this.banner = null;
    this.layout = checked.value;
    if (this.state.selected !== null && !this.loadedIds().has(this.state.selected)) {
      // the filtered payload no longer contains the selection
      this.state.selected = null;
      this.methodDoc = null;
    }
    this.render();
  }

  // -- rendering -------------------------------------------------------

  render(): void {
    this.renderBanner();
    this.renderStatus();
    this.renderHits();
    this.renderView();
    this.renderPanelSlot();
    this.renderFormOutcome();
  }

  private renderBanner(): void {
    const banner = this.byId("mg-banner");
    banner.textContent = this.banner ?? "";
    banner.hidden = this.banner === null;
  }

  private renderStatus(): void {
    const status = this.byId("mg-status");
    if (!this.layout) {
      status.textContent = "";
      return;
    }
    const count = `${this.layout.nodes.length} methods`;
    status.textContent = this.areaGraph ? `${this.areaGraph.area}: ${count}` : count;
  }

  private renderHits(): void {
    const hits = this.byId("mg-hits");
    hits.replaceChildren();
    for (const acronym of this.searchHits) {
      const item = this.doc.createElement("li");
      const button = this.doc.createElement("button");
      button.type = "button";
      button.className = "hit-link";
      button.dataset.acronym = acronym;
      button.textContent = acronym;
      button.addEventListener("click", () => this.track(this.selectNode(acronym)));
      item.appendChild(button);
      hits.appendChild(item);
    }
  }

  private renderView(): void {
    const sceneHost = this.byId("mg-scene-host");
    const flatHost = this.byId("mg-flat-host");
    const hint = this.byId("mg-hint");
    sceneHost.hidden = this.state.mode !== "3D";
    flatHost.hidden = this.state.mode !== "2D";
    flatHost.replaceChildren();

    if (!this.layout) {
      this.scene = null;
      this.onSceneChange?.(null);
      hint.hidden = true;
      return;
    }
    if (this.layout.nodes.length === 0) {
      this.scene = null;
      this.onSceneChange?.(null);
      hint.textContent = "nothing to display yet; add a method to get started";
      hint.hidden = false;
      return;
    }
    hint.hidden = true;

    const highlighted = new Set(this.searchHits);
    if (this.state.mode === "2D") {
      flatHost.appendChild(
        renderView2D(this.doc, this.layout, {
          selected: this.state.selected,
          highlighted,
          showConceptual: this.state.includeConceptual,
          onSelect: (acronym) => this.track(this.selectNode(acronym)),
        }),
      );
      this.scene = null;
      this.onSceneChange?.(null);
    } else {
      this.scene = buildGraphScene(this.layout, {
        selected: this.state.selected,
        highlighted,
        showConceptual: this.state.includeConceptual,
      });
      this.onSceneChange?.(this.scene);
    }
  }

  private renderPanelSlot(): void {
    const slot = this.byId("mg-panel");
    slot.replaceChildren();
    if (this.methodDoc && this.state.selected) {
      slot.appendChild(
        renderPanel(this.doc, this.methodDoc, {
          onNavigate: (acronym) => this.track(this.selectNode(acronym)),
          onClose: () => this.clearSelection(),
        }),
      );
    }
  }

  private renderFormOutcome(): void {
    const status = this.byId("mg-form-status");
    const issues = this.byId("mg-form-issues");
    issues.replaceChildren();
    if (!this.formOutcome) {
      status.textContent = "";
      return;
    }
    status.textContent = this.formOutcome.status;
    for (const issue of this.formOutcome.issues) {
      const item = this.doc.createElement("li");
      item.dataset.code = issue.code;
      item.textContent = issueLine(issue);
      issues.appendChild(item);
    }
  }

  // -- static chrome ---------------------------------------------------

  private buildChrome(): void {
    this.root.innerHTML = `
      <div class="toolbar">
        <button type="button" id="mg-mode"></button>
        <select id="mg-area"><option value="">all areas</option></select>
        <label><input type="checkbox" id="mg-conceptual" checked> conceptual links</label>
        <input id="mg-search" type="search" placeholder="search methods" />
        <button type="button" id="mg-add">add method</button>
      </div>
      <div id="mg-banner" class="banner" hidden></div>
      <div id="mg-status" class="status"></div>
      <ol id="mg-hits" class="hits"></ol>
      <div id="mg-main">
        <div id="mg-view">
          <div id="mg-scene-host" data-role="scene-host"></div>
          <div id="mg-flat-host"></div>
          <div id="mg-hint" class="hint" hidden></div>
        </div>
        <div id="mg-panel"></div>
      </div>
      <form id="mg-form" hidden>
        ${RECORD_FIELDS.map((field) => formRow(field)).join("\n")}
        <label>submitter <input name="submitter" /></label>
        <button type="submit">submit</button>
        <div id="mg-form-status"></div>
        <ul id="mg-form-issues"></ul>
      </form>
    `;

    const mode = this.byId("mg-mode") as HTMLButtonElement;
    const syncModeLabel = () => {
      mode.textContent = this.state.mode === "3D" ? "switch to 2D" : "switch to 3D";
    };
    syncModeLabel();
    mode.addEventListener("click", () => {
      const next = this.state.mode === "3D" ? "2D" : "3D";
      this.track(this.setMode(next).then(syncModeLabel));
    });

    const area = this.byId("mg-area") as HTMLSelectElement;
    area.addEventListener("change", () => {
      this.track(this.setArea(area.value === "" ? null : area.value));
    });

    const conceptual = this.byId("mg-conceptual") as HTMLInputElement;
    conceptual.addEventListener("change", () => this.setConceptual(conceptual.checked));

    const search = this.byId("mg-search") as HTMLInputElement;
    search.addEventListener("input", () => this.track(this.runSearch(search.value)));

    const form = this.byId("mg-form") as HTMLFormElement;
    this.byId("mg-add").addEventListener("click", () => {
      form.hidden = !form.hidden;
    });
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const values: Record<string, string> = {};
      for (const element of Array.from(form.elements)) {
        const input = element as HTMLInputElement;
        if (input.name) values[input.name] = input.value;
      }
      this.track(this.submitForm(values));
    });
  }

  private fillAreaOptions(): void {
    const select = this.byId("mg-area") as HTMLSelectElement;
    const current = this.state.activeArea ?? "";
    select.replaceChildren();
    const all = this.doc.createElement("option");
    all.value = "";
    all.textContent = "all areas";
    select.appendChild(all);
    for (const name of this.areaNames) {
      const option = this.doc.createElement("option");
      option.value = name;
      option.textContent = name;
      select.appendChild(option);
    }
    select.value = current;
  }

  private track(work: Promise<unknown>): void {
    this.pending = this.pending.then(() => work.then(() => undefined, () => undefined));
  }

  private byId(id: string): HTMLElement {
    const found = this.root.querySelector(`#${id}`);
    if (!found) throw new Error(`missing element #${id}`);
    return found as HTMLElement;
  }
}

function formRow(field: string): string {
  const input =
    field === "description"
      ? `<textarea name="${field}"></textarea>`
      : `<input name="${field}" />`;
  return `<label>${field.replace(/_/g, " ")} ${input}</label>`;
}

function splitList(value: string, separator: string): string[] {
  return value
    .split(separator)
    .map((part) => part.trim())
    .filter((part) => part !== "");
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return `${error.code}: ${error.detail}`;
  return error instanceof Error ? error.message : String(error);
}
