import { describe, expect, it } from "vitest";

import {
  annotationPayload,
  categoryEnabled,
  initialState,
  submitEnabled,
  withCategories,
  withCategorySelected,
  withChoiceLists,
  withParentSelected,
  withQuery,
} from "../src/state.js";

const SENTINELS = ["NONE", "NOT_AN_ANSWER"];

function loadedState() {
  let state = withChoiceLists(initialState(), ["Food", "Shopping"], SENTINELS);
  state = withQuery(state, { queryId: "q1", text: "where can i buy a cake" }, 10, 0);
  return state;
}

describe("category gating", () => {
  it("is locked before any parent is chosen", () => {
    expect(categoryEnabled(loadedState())).toBe(false);
  });

  it("unlocks after a real parent is chosen", () => {
    const state = withParentSelected(loadedState(), "Food");
    expect(categoryEnabled(state)).toBe(true);
  });

  it("stays locked when a sentinel is the parent-level choice", () => {
    const state = withParentSelected(loadedState(), "NONE");
    expect(categoryEnabled(state)).toBe(false);
  });
});

describe("submit gating", () => {
  it("needs a complete choice", () => {
    let state = loadedState();
    expect(submitEnabled(state)).toBe(false);
    state = withParentSelected(state, "Food");
    expect(submitEnabled(state)).toBe(false);
    state = withCategories(state, ["Cake Shop", "Bar", ...SENTINELS]);
    state = withCategorySelected(state, "Cake Shop");
    expect(submitEnabled(state)).toBe(true);
  });

  it("a sentinel alone is a complete choice", () => {
    const state = withParentSelected(loadedState(), "NOT_AN_ANSWER");
    expect(submitEnabled(state)).toBe(true);
  });

  it("never submits without a query", () => {
    let state = withChoiceLists(initialState(), ["Food"], SENTINELS);
    state = withQuery(state, null, 10, 10);
    expect(submitEnabled(state)).toBe(false);
  });
});

describe("payload building", () => {
  it("uses the chosen parent and category verbatim", () => {
    let state = withParentSelected(loadedState(), "Food");
    state = withCategories(state, ["Cake Shop", "Bar", ...SENTINELS]);
    state = withCategorySelected(state, "Cake Shop");
    expect(annotationPayload(state, "ann-1")).toEqual({
      query_id: "q1",
      annotator_id: "ann-1",
      parent: "Food",
      category: "Cake Shop",
    });
  });

  it("fills both fields with the sentinel", () => {
    const state = withParentSelected(loadedState(), "NONE");
    expect(annotationPayload(state, "ann-1")).toEqual({
      query_id: "q1",
      annotator_id: "ann-1",
      parent: "NONE",
      category: "NONE",
    });
  });

  it("a sentinel picked at the category step covers the whole query", () => {
    let state = withParentSelected(loadedState(), "Food");
    state = withCategories(state, ["Cake Shop", ...SENTINELS]);
    state = withCategorySelected(state, "NOT_AN_ANSWER");
    expect(annotationPayload(state, "ann-1")).toEqual({
      query_id: "q1",
      annotator_id: "ann-1",
      parent: "NOT_AN_ANSWER",
      category: "NOT_AN_ANSWER",
    });
  });

  it("is null while the choice is incomplete", () => {
    expect(annotationPayload(loadedState(), "ann-1")).toBeNull();
  });
});

describe("labels only ever come from service responses", () => {
  it("rejects a parent value outside the dropdown lists", () => {
    const state = withParentSelected(loadedState(), "Fabricated");
    expect(state.selectedParent).toBeNull();
  });

  it("rejects a category value outside the fetched list", () => {
    let state = withParentSelected(loadedState(), "Food");
    state = withCategories(state, ["Cake Shop", ...SENTINELS]);
    state = withCategorySelected(state, "Fabricated");
    expect(state.selectedCategory).toBeNull();
  });

  it("clears the category when the parent changes", () => {
    let state = withParentSelected(loadedState(), "Food");
    state = withCategories(state, ["Cake Shop", ...SENTINELS]);
    state = withCategorySelected(state, "Cake Shop");
    state = withParentSelected(state, "Shopping");
    expect(state.selectedCategory).toBeNull();
    expect(state.categories).toEqual([]);
  });
});
