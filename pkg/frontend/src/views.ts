/**
 * DOM views for the review flow. Views render into a host element and call
 * back into the app; all mutations round-trip through the ApiClient.
 */
import { ApiClient, ApiError, ContextEntry, Review } from "./api.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

export function renderDiff(diff: string | null): HTMLElement {
  const pre = el("pre", "diff");
  if (!diff) {
    pre.textContent = "(no diff)";
    return pre;
  }
  for (const line of diff.split("\n")) {
    const span = el("span", "diff-line");
    if (line.startsWith("+")) span.classList.add("diff-add");
    else if (line.startsWith("-")) span.classList.add("diff-del");
    else if (line.startsWith("@@")) span.classList.add("diff-hunk");
    span.textContent = line;
    pre.append(span, document.createTextNode("\n"));
  }
  return pre;
}

export function renderContextTree(entries: ContextEntry[]): HTMLElement {
  const list = el("ul", "context-tree");
  if (entries.length === 0) {
    list.append(el("li", "context-empty", "(no project-internal callees)"));
    return list;
  }
  for (const entry of entries) {
    const item = el("li", "context-entry");
    item.style.marginLeft = `${Math.max(0, entry.depth - 1) * 16}px`;
    item.append(el("code", "context-method", entry.method));
    if (entry.stub) {
      item.append(el("span", "badge badge-stub", "[signature only]"));
    }
    item.append(el("span", "context-text", ` ${entry.text}`));
    list.append(item);
  }
  return list;
}

/** Five-button star input; emits only integers 1..5. */
export class StarRating {
  readonly root: HTMLElement;
  private current: number | null = null;

  constructor(private readonly onChange: (value: number) => void) {
    this.root = el("div", "stars");
    for (let value = 1; value <= 5; value++) {
      const button = el("button", "star", "☆");
      button.type = "button";
      button.dataset.value = String(value);
      button.setAttribute("aria-label", `${value} star${value > 1 ? "s" : ""}`);
      button.addEventListener("click", () => this.set(value));
      this.root.append(button);
    }
  }

  get value(): number | null {
    return this.current;
  }

  set(value: number): void {
    const clamped = Math.min(5, Math.max(1, Math.round(value)));
    this.current = clamped;
    const buttons = this.root.querySelectorAll<HTMLButtonElement>("button.star");
    buttons.forEach((button, index) => {
      button.textContent = index < clamped ? "★" : "☆";
    });
    this.onChange(clamped);
  }
}

export class FeedbackForm {
  readonly root: HTMLElement;
  private rating: number | null = null;
  private readonly stars: StarRating;
  private readonly textArea: HTMLTextAreaElement;
  private readonly message: HTMLElement;

  constructor(
    private readonly client: ApiClient,
    private readonly review: Review,
    private readonly onDone: () => void = () => {},
  ) {
    this.root = el("div", "feedback-form");
    this.root.append(el("h3", "", "How good was this suggestion?"));
    this.stars = new StarRating((value) => {
      this.rating = value;
    });
    this.root.append(this.stars.root);
    this.textArea = el("textarea", "feedback-text");
    this.textArea.placeholder = "Optional comments (anonymous)";
    this.root.append(this.textArea);
    const row = el("div", "button-row");
    const submit = el("button", "primary", "Send feedback");
    submit.addEventListener("click", () => void this.submit());
    const skip = el("button", "", "Skip");
    skip.addEventListener("click", () => this.onDone());
    row.append(submit, skip);
    this.message = el("p", "inline-message", "");
    this.root.append(row, this.message);
  }

  async submit(): Promise<void> {
    if (this.rating === null) {
      this.message.textContent = "Pick a star rating first (1-5).";
      return;
    }
    try {
      await this.client.feedback({
        rating: this.rating,
        model: this.review.model || "unknown",
        text: this.textArea.value || null,
        review_id: this.review.id,
      });
      this.message.textContent = "Thanks! Feedback recorded.";
      this.onDone();
    } catch (err) {
      this.message.textContent =
        err instanceof ApiError ? err.detail : "Could not send feedback.";
    }
  }
}

export class ReviewDetailView {
  readonly root: HTMLElement;
  private review: Review;
  private readonly errorBox: HTMLElement;
  private readonly body: HTMLElement;
  private editor: HTMLTextAreaElement | null = null;

  constructor(
    private readonly client: ApiClient,
    review: Review,
    private readonly onDecided: (review: Review) => void = () => {},
  ) {
    this.review = review;
    this.root = el("section", "review-detail");
    this.errorBox = el("p", "inline-error", "");
    this.body = el("div", "");
    this.root.append(this.body, this.errorBox);
    this.render();
  }

  private render(): void {
    const r = this.review;
    this.body.replaceChildren();
    const heading = el("h2", "", r.method);
    heading.append(el("span", `chip chip-${r.state}`, r.state));
    this.body.append(heading);
    this.body.append(el("p", "file-path", r.file));

    if (r.state === "failed") {
      this.body.append(el("p", "inline-error", r.error ?? "generation failed"));
      return;
    }
    if (!r.ready && r.status === "pending") {
      this.body.append(el("p", "", "Generating…"));
      return;
    }

    this.body.append(el("h3", "", "Proposed comment"));
    this.body.append(el("pre", "proposed", r.proposed ?? ""));

    this.body.append(el("h3", "", "Diff"));
    this.body.append(renderDiff(r.diff));

    this.body.append(el("h3", "", "Context (visiting order)"));
    this.body.append(renderContextTree(r.context));

    if (r.state === "ready") {
      const row = el("div", "button-row");
      const accept = el("button", "primary action-accept", "Accept");
      accept.addEventListener("click", () => void this.accept());
      const reject = el("button", "action-reject", "Reject");
      reject.addEventListener("click", () => void this.reject());
      const edit = el("button", "action-edit", "Edit…");
      edit.addEventListener("click", () => this.startEdit());
      row.append(accept, reject, edit);
      this.body.append(row);
    }
  }

  private update(review: Review): void {
    this.review = review;
    this.errorBox.textContent = "";
    this.render();
    this.onDecided(review);
  }

  private surface(err: unknown): void {
    if (err instanceof ApiError) {
      this.errorBox.textContent =
        err.status === 409
          ? `${err.detail} — the file changed; re-generate this review.`
          : err.detail;
    } else {
      this.errorBox.textContent = "Request failed; is the service running?";
    }
  }

  async accept(): Promise<void> {
    try {
      this.update(await this.client.decide(this.review.id, "accept"));
    } catch (err) {
      this.surface(err);
    }
  }

  async reject(): Promise<void> {
    try {
      this.update(await this.client.decide(this.review.id, "reject"));
    } catch (err) {
      this.surface(err);
    }
  }

  startEdit(): void {
    if (this.editor) return;
    this.editor = el("textarea", "editor");
    this.editor.value = this.review.proposed ?? "";
    const save = el("button", "primary action-save-edit", "Save edit");
    save.addEventListener("click", () => void this.saveEdit());
    this.body.append(this.editor, save);
  }

  async saveEdit(): Promise<void> {
    if (!this.editor) return;
    try {
      this.update(await this.client.decide(this.review.id, "edit", this.editor.value));
      this.editor = null;
    } catch (err) {
      this.surface(err); // 422 detail stays inline; editor stays open
    }
  }

  get errorText(): string {
    return this.errorBox.textContent ?? "";
  }

  get state(): string {
    return this.review.state;
  }
}

export class ReviewListView {
  readonly root: HTMLElement;

  constructor(private readonly onOpen: (review: Review) => void) {
    this.root = el("ul", "review-list");
  }

  render(reviews: Review[]): void {
    this.root.replaceChildren();
    if (reviews.length === 0) {
      this.root.append(el("li", "empty-state", "No reviews yet. Generate one above."));
      return;
    }
    for (const review of reviews) {
      const item = el("li", "review-item");
      const link = el("a", "review-link", review.method);
      link.href = "#";
      link.addEventListener("click", (event) => {
        event.preventDefault();
        this.onOpen(review);
      });
      item.append(link, el("span", `chip chip-${review.state}`, review.state));
      this.root.append(item);
    }
  }
}
