// Pure UI state for the question flow. The rules the DOM shell relies on:
// the category dropdown opens only after a real parent is chosen, submit is
// possible only with a complete choice, and every value in a payload comes
// verbatim from a service response (the UI never fabricates labels).

import type { AnnotationPayload, QueryRecord } from "./api.js";

export interface UiState {
  query: QueryRecord | null;
  exhausted: boolean;
  assigned: number;
  completed: number;
  parents: string[];
  sentinels: string[];
  categories: string[];
  selectedParent: string | null;
  selectedCategory: string | null;
  error: string | null;
}

export function initialState(): UiState {
  return {
    query: null,
    exhausted: false,
    assigned: 0,
    completed: 0,
    parents: [],
    sentinels: [],
    categories: [],
    selectedParent: null,
    selectedCategory: null,
    error: null,
  };
}

export function isSentinel(state: UiState, value: string | null): boolean {
  return value !== null && state.sentinels.includes(value);
}

/** True when the category dropdown should accept input. */
export function categoryEnabled(state: UiState): boolean {
  return (
    state.query !== null &&
    state.selectedParent !== null &&
    !isSentinel(state, state.selectedParent)
  );
}

/** A complete choice: a sentinel at the parent step, or parent + category. */
export function submitEnabled(state: UiState): boolean {
  if (state.query === null) return false;
  if (isSentinel(state, state.selectedParent)) return true;
  return state.selectedParent !== null && state.selectedCategory !== null;
}

/** The POST body for the current choice, or null while incomplete. */
export function annotationPayload(state: UiState, annotatorId: string): AnnotationPayload | null {
  if (!submitEnabled(state) || state.query === null) return null;
  const parent = state.selectedParent as string;
  if (isSentinel(state, parent)) {
    return { query_id: state.query.queryId, annotator_id: annotatorId, parent, category: parent };
  }
  const category = state.selectedCategory as string;
  if (isSentinel(state, category)) {
    // sentinel picked at the category step counts for the whole query
    return {
      query_id: state.query.queryId,
      annotator_id: annotatorId,
      parent: category,
      category,
    };
  }
  return { query_id: state.query.queryId, annotator_id: annotatorId, parent, category };
}

export function withChoiceLists(state: UiState, parents: string[], sentinels: string[]): UiState {
  return { ...state, parents: [...parents], sentinels: [...sentinels] };
}

export function withQuery(
  state: UiState,
  query: QueryRecord | null,
  assigned: number,
  completed: number,
): UiState {
  return {
    ...state,
    query,
    exhausted: query === null,
    assigned,
    completed,
    selectedParent: null,
    selectedCategory: null,
    categories: [],
    error: null,
  };
}

/** Ignores values that did not come from the parent dropdown. */
export function withParentSelected(state: UiState, value: string): UiState {
  if (!state.parents.includes(value) && !state.sentinels.includes(value)) {
    return state;
  }
  return { ...state, selectedParent: value, selectedCategory: null, categories: [] };
}

export function withCategories(state: UiState, categories: string[]): UiState {
  return { ...state, categories: [...categories] };
}

/** Ignores values that did not come from the category dropdown. */
export function withCategorySelected(state: UiState, value: string): UiState {
  if (!state.categories.includes(value)) {
    return state;
  }
  return { ...state, selectedCategory: value };
}

export function withError(state: UiState, message: string): UiState {
  return { ...state, error: message };
}

export function withErrorCleared(state: UiState): UiState {
  return { ...state, error: null };
}
