/** App shell: method picker, polled review list, detail pane, offline banner. */
import { ApiClient, MethodInfo, Review } from "./api.js";
import { Poller } from "./poller.js";
import { el, FeedbackForm, ReviewDetailView, ReviewListView } from "./views.js";

export class App {
  private readonly banner: HTMLElement;
  private readonly picker: HTMLSelectElement;
  private readonly listView: ReviewListView;
  private readonly detailHost: HTMLElement;
  private readonly poller: Poller;
  private openReviewId: string | null = null;

  constructor(
    private readonly client: ApiClient,
    private readonly host: HTMLElement,
    pollIntervalMs = 2000,
  ) {
    this.banner = el("div", "banner hidden", "Service unreachable — retrying…");
    this.picker = el("select", "method-picker");
    this.listView = new ReviewListView((review) => this.open(review));
    this.detailHost = el("div", "detail-host");
    this.poller = new Poller(() => this.refresh(), pollIntervalMs);
    this.build();
  }

  private build(): void {
    this.host.replaceChildren();
    this.host.append(this.banner);
    this.host.append(el("h1", "", "smartdoc review"));

    const controls = el("div", "controls");
    controls.append(this.picker);
    const generate = el("button", "primary action-generate", "Generate comment");
    generate.addEventListener("click", () => void this.generate());
    controls.append(generate);
    this.host.append(controls);

    this.host.append(el("h2", "", "Reviews"));
    this.host.append(this.listView.root);
    this.host.append(this.detailHost);
  }

  async start(): Promise<void> {
    await this.loadMethods();
    this.poller.start();
  }

  stop(): void {
    this.poller.stop();
  }

  private async loadMethods(): Promise<void> {
    try {
      const methods = await this.client.methods();
      this.renderMethods(methods);
      this.banner.classList.add("hidden");
    } catch {
      this.banner.classList.remove("hidden");
    }
  }

  private renderMethods(methods: MethodInfo[]): void {
    this.picker.replaceChildren();
    for (const m of methods) {
      const option = el("option", "", `${m.id}${m.has_doc ? "" : "  (undocumented)"}`);
      option.value = m.id;
      this.picker.append(option);
    }
  }

  async generate(): Promise<void> {
    const methodId = this.picker.value;
    if (!methodId) return;
    try {
      const { review_id } = await this.client.generate(methodId);
      this.openReviewId = review_id;
      await this.refresh();
    } catch {
      this.banner.classList.remove("hidden");
    }
  }

  async refresh(): Promise<void> {
    let reviews: Review[];
    try {
      reviews = await this.client.reviews();
      this.banner.classList.add("hidden");
    } catch {
      this.banner.classList.remove("hidden");
      return;
    }
    this.listView.render(reviews);
    if (this.openReviewId) {
      const current = reviews.find((r) => r.id === this.openReviewId);
      if (current) this.renderDetail(current);
    }
  }

  open(review: Review): void {
    this.openReviewId = review.id;
    this.renderDetail(review);
  }

  private renderDetail(review: Review): void {
    const detail = new ReviewDetailView(this.client, review, (decided) => {
      if (["accepted", "edited", "rejected"].includes(decided.state)) {
        const form = new FeedbackForm(this.client, decided, () => {
          form.root.remove();
        });
        this.detailHost.append(form.root);
      }
    });
    this.detailHost.replaceChildren(detail.root);
  }
}

declare global {
  interface Window {
    smartdocApp?: App;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const app = new App(new ApiClient(), document.getElementById("app")!);
  window.smartdocApp = app;
  void app.start();
}
