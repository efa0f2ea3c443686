import { beforeEach, describe, expect, it } from "vitest";

import type { AnnotationPayload, ApiClient, NextInfo } from "../src/api.js";
import { AnnotationApp } from "../src/app.js";

const SENTINELS = ["NONE", "NOT_AN_ANSWER"];
const CHILDREN: Record<string, string[]> = {
  Food: ["Cake Shop", "Bar"],
  Shopping: ["Book Store", "Pet Store"],
};

class StubApi {
  queue: Array<{ queryId: string; text: string }>;
  submitted: AnnotationPayload[] = [];
  failNextSubmit = false;
  assigned: number;

  constructor(queries: Array<{ queryId: string; text: string }>) {
    this.queue = [...queries];
    this.assigned = queries.length;
  }

  async parents() {
    return { parents: Object.keys(CHILDREN), sentinels: SENTINELS };
  }

  async categories(parent: string) {
    const children = CHILDREN[parent];
    if (!children) throw new Error(`no such parent ${parent}`);
    return [...children, ...SENTINELS];
  }

  async next(): Promise<NextInfo> {
    const completed = this.assigned - this.queue.length;
    const query = this.queue[0] ?? null;
    return { assigned: this.assigned, completed, exhausted: query === null, query };
  }

  async submit(payload: AnnotationPayload) {
    if (this.failNextSubmit) {
      this.failNextSubmit = false;
      throw new Error("service unavailable");
    }
    this.submitted.push(payload);
    this.queue.shift();
  }
}

function select(root: HTMLElement, selector: string, value: string) {
  const element = root.querySelector(selector) as HTMLSelectElement;
  element.value = value;
  element.dispatchEvent(new Event("change", { bubbles: true }));
}

function optionValues(root: HTMLElement, selector: string): string[] {
  const element = root.querySelector(selector) as HTMLSelectElement;
  return Array.from(element.options)
    .map((o) => o.value)
    .filter((v) => v !== "");
}

async function flush() {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

describe("annotation app", () => {
  let root: HTMLElement;
  let api: StubApi;
  let app: AnnotationApp;

  beforeEach(async () => {
    document.body.innerHTML = '<div id="app"></div>';
    root = document.getElementById("app") as HTMLElement;
    api = new StubApi([
      { queryId: "q1", text: "where can i buy a cake" },
      { queryId: "q2", text: "history of rome" },
    ]);
    app = new AnnotationApp(root, api as unknown as ApiClient, "ann-1");
    await app.start();
    await flush();
  });

  it("shows the query and the parent choices plus sentinels", () => {
    expect(root.querySelector("#query-text")?.textContent).toBe("where can i buy a cake");
    expect(optionValues(root, "#parent-select")).toEqual(["Food", "Shopping", ...SENTINELS]);
    expect((root.querySelector("#category-select") as HTMLSelectElement).disabled).toBe(true);
  });

  it("selecting a parent fills the category dropdown with its children only", async () => {
    select(root, "#parent-select", "Food");
    await flush();
    expect(optionValues(root, "#category-select")).toEqual(["Cake Shop", "Bar", ...SENTINELS]);
    expect((root.querySelector("#submit") as HTMLButtonElement).disabled).toBe(true);
    select(root, "#category-select", "Cake Shop");
    expect((root.querySelector("#submit") as HTMLButtonElement).disabled).toBe(false);
  });

  it("a sentinel choice enables submit without a category", async () => {
    select(root, "#parent-select", "NOT_AN_ANSWER");
    await flush();
    expect((root.querySelector("#category-select") as HTMLSelectElement).disabled).toBe(true);
    expect((root.querySelector("#submit") as HTMLButtonElement).disabled).toBe(false);
  });

  it("submitting advances to the next query", async () => {
    select(root, "#parent-select", "Food");
    await flush();
    select(root, "#category-select", "Cake Shop");
    (root.querySelector("#submit") as HTMLButtonElement).click();
    await flush();
    expect(api.submitted).toEqual([
      { query_id: "q1", annotator_id: "ann-1", parent: "Food", category: "Cake Shop" },
    ]);
    expect(root.querySelector("#query-text")?.textContent).toBe("history of rome");
    expect(root.querySelector("#progress")?.textContent).toBe("1 / 2");
  });

  it("a service error raises the banner and keeps the selection", async () => {
    select(root, "#parent-select", "Food");
    await flush();
    select(root, "#category-select", "Bar");
    api.failNextSubmit = true;
    (root.querySelector("#submit") as HTMLButtonElement).click();
    await flush();
    const banner = root.querySelector("#error-banner") as HTMLDivElement;
    expect(banner.hidden).toBe(false);
    expect(app.state.selectedParent).toBe("Food");
    expect(app.state.selectedCategory).toBe("Bar");

    (root.querySelector("#retry") as HTMLButtonElement).click();
    await flush();
    expect(api.submitted).toHaveLength(1);
    expect((root.querySelector("#error-banner") as HTMLDivElement).hidden).toBe(true);
  });

  it("finishing the last query shows the completion screen with the count", async () => {
    for (const choice of ["Cake Shop", "Bar"]) {
      select(root, "#parent-select", "Food");
      await flush();
      select(root, "#category-select", choice);
      (root.querySelector("#submit") as HTMLButtonElement).click();
      await flush();
    }
    const done = root.querySelector("#done") as HTMLDivElement;
    expect(done.hidden).toBe(false);
    expect(root.querySelector("#done-count")?.textContent).toBe("2");
    expect((root.querySelector("#question") as HTMLDivElement).hidden).toBe(true);
  });
});
