// DOM shell for the question flow: one query at a time, a type dropdown that
// filters the category dropdown, sentinel choices always reachable, and a
// retry banner that never drops an in-progress selection.

import { ApiClient } from "./api.js";
import {
  UiState,
  annotationPayload,
  categoryEnabled,
  initialState,
  isSentinel,
  submitEnabled,
  withCategories,
  withCategorySelected,
  withChoiceLists,
  withError,
  withErrorCleared,
  withParentSelected,
  withQuery,
} from "./state.js";

const PLACEHOLDER = "";

export class AnnotationApp {
  state: UiState = initialState();

  private queryText!: HTMLParagraphElement;
  private parentSelect!: HTMLSelectElement;
  private categorySelect!: HTMLSelectElement;
  private submitButton!: HTMLButtonElement;
  private progress!: HTMLSpanElement;
  private banner!: HTMLDivElement;
  private bannerText!: HTMLSpanElement;
  private retryButton!: HTMLButtonElement;
  private question!: HTMLDivElement;
  private done!: HTMLDivElement;
  private doneCount!: HTMLSpanElement;
  private retryAction: (() => Promise<void>) | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly annotatorId: string,
  ) {}

  async start(): Promise<void> {
    this.mount();
    await this.guard(async () => {
      const lists = await this.api.parents();
      this.state = withChoiceLists(this.state, lists.parents, lists.sentinels);
      this.fillParentOptions();
      await this.advance();
    });
  }

  private mount(): void {
    this.root.innerHTML = `
      <div class="annotator">
        <header>
          <h1>Query annotation</h1>
          <span id="progress"></span>
        </header>
        <div id="error-banner" hidden>
          <span id="error-text"></span>
          <button id="retry" type="button">Retry</button>
        </div>
        <div id="question" hidden>
          <p id="query-text"></p>
          <label>Type
            <select id="parent-select"></select>
          </label>
          <label>Category
            <select id="category-select" disabled></select>
          </label>
          <button id="submit" type="button" disabled>Submit</button>
        </div>
        <div id="done" hidden>
          <p>Session complete: <span id="done-count"></span> queries annotated.</p>
        </div>
      </div>`;
    this.queryText = this.must<HTMLParagraphElement>("#query-text");
    this.parentSelect = this.must<HTMLSelectElement>("#parent-select");
    this.categorySelect = this.must<HTMLSelectElement>("#category-select");
    this.submitButton = this.must<HTMLButtonElement>("#submit");
    this.progress = this.must<HTMLSpanElement>("#progress");
    this.banner = this.must<HTMLDivElement>("#error-banner");
    this.bannerText = this.must<HTMLSpanElement>("#error-text");
    this.retryButton = this.must<HTMLButtonElement>("#retry");
    this.question = this.must<HTMLDivElement>("#question");
    this.done = this.must<HTMLDivElement>("#done");
    this.doneCount = this.must<HTMLSpanElement>("#done-count");

    this.parentSelect.addEventListener("change", () => void this.onParentChange());
    this.categorySelect.addEventListener("change", () => this.onCategoryChange());
    this.submitButton.addEventListener("click", () => void this.onSubmit());
    this.retryButton.addEventListener("click", () => void this.onRetry());
    // annotators live on the keyboard: Enter fires the submit from anywhere
    this.root.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter" && !this.submitButton.disabled) {
        event.preventDefault();
        void this.onSubmit();
      }
    });
  }

  private must<T extends Element>(selector: string): T {
    const element = this.root.querySelector(selector);
    if (!element) throw new Error(`missing element ${selector}`);
    return element as T;
  }

  private fillParentOptions(): void {
    this.setOptions(this.parentSelect, [...this.state.parents, ...this.state.sentinels]);
  }

  private setOptions(select: HTMLSelectElement, values: string[]): void {
    select.innerHTML = "";
    const placeholder = select.ownerDocument.createElement("option");
    placeholder.value = PLACEHOLDER;
    placeholder.textContent = "choose...";
    placeholder.disabled = true;
    placeholder.selected = true;
    select.appendChild(placeholder);
    for (const value of values) {
      const option = select.ownerDocument.createElement("option");
      option.value = value;
      option.textContent = value;
      select.appendChild(option);
    }
  }

  private async onParentChange(): Promise<void> {
    const value = this.parentSelect.value;
    if (value === PLACEHOLDER) return;
    this.state = withParentSelected(this.state, value);
    if (categoryEnabled(this.state)) {
      await this.guard(async () => {
        const categories = await this.api.categories(value);
        this.state = withCategories(this.state, categories);
        this.setOptions(this.categorySelect, categories);
        this.render();
        this.categorySelect.focus();
      });
      return;
    }
    this.render();
  }

  private onCategoryChange(): void {
    const value = this.categorySelect.value;
    if (value === PLACEHOLDER) return;
    this.state = withCategorySelected(this.state, value);
    this.render();
  }

  private async onSubmit(): Promise<void> {
    const payload = annotationPayload(this.state, this.annotatorId);
    if (!payload) return;
    await this.guard(async () => {
      await this.api.submit(payload);
      await this.advance();
    });
  }

  private async advance(): Promise<void> {
    const info = await this.api.next(this.annotatorId);
    this.state = withQuery(this.state, info.query, info.assigned, info.completed);
    this.fillParentOptions();
    this.setOptions(this.categorySelect, []);
    this.render();
    if (!this.state.exhausted) this.parentSelect.focus();
  }

  private async onRetry(): Promise<void> {
    const action = this.retryAction;
    this.retryAction = null;
    this.state = withErrorCleared(this.state);
    this.render();
    if (action) await this.guard(action);
  }

  /** Run a server interaction; failures raise the banner and arm the retry. */
  private async guard(action: () => Promise<void>): Promise<void> {
    try {
      await action();
    } catch (error) {
      this.retryAction = action;
      const message = error instanceof Error ? error.message : String(error);
      this.state = withError(this.state, message);
      this.render();
    }
  }

  render(): void {
    this.progress.textContent = `${this.state.completed} / ${this.state.assigned}`;
    this.banner.hidden = this.state.error === null;
    this.bannerText.textContent = this.state.error ?? "";
    this.question.hidden = this.state.query === null;
    this.done.hidden = !this.state.exhausted;
    if (this.state.exhausted) {
      this.doneCount.textContent = String(this.state.completed);
    }
    if (this.state.query) {
      this.queryText.textContent = this.state.query.text;
    }
    const sentinelParent = isSentinel(this.state, this.state.selectedParent);
    this.categorySelect.disabled = !categoryEnabled(this.state) || sentinelParent;
    this.submitButton.disabled = !submitEnabled(this.state);
  }
}
