/** View state: everything the screen is a function of besides payloads. */

export type ViewMode = "3D" | "2D";

export interface ViewState {
  mode: ViewMode;
  selected: string | null;
  activeArea: string | null;
  searchQuery: string;
  includeConceptual: boolean;
}

export function initialViewState(mode: ViewMode = "3D"): ViewState {
  return {
    mode,
    selected: null,
    activeArea: null,
    searchQuery: "",
    includeConceptual: true,
  };
}

/** Selection must name a node in the loaded payload; otherwise no-op. */
export function withSelection(
  state: ViewState,
  acronym: string | null,
  loadedIds: ReadonlySet<string>,
): ViewState {
  if (acronym !== null && !loadedIds.has(acronym)) return state;
  return { ...state, selected: acronym };
}
