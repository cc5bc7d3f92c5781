/**
 * Typed client for the smartdoc review service. Every state change in the UI
 * goes through this client; the UI itself never touches source files.
 */

export interface MethodInfo {
  id: string;
  file: string;
  package: string;
  name: string;
  has_doc: boolean;
}

export interface ContextEntry {
  method: string;
  text: string;
  stub: boolean;
  depth: number;
}

export interface Review {
  id: string;
  method: string;
  file: string;
  original_doc: string | null;
  status: string;
  ready: boolean;
  proposed: string | null;
  diff: string | null;
  context: ContextEntry[];
  model: string;
  retries: number;
  error: string | null;
  created_at: string;
  updated_at: string;
  state: string;
}

export interface GraphView {
  root: string;
  nodes: { id: string; depth: number }[];
  edges: [string, string][];
  back_edges: [string, string][];
  schedule: string[];
}

export type Decision = "accept" | "reject" | "edit";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function parseDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (typeof body?.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return response.statusText || "request failed";
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      throw new ApiError(response.status, await parseDetail(response));
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/api/health");
  }

  methods(pkg?: string): Promise<MethodInfo[]> {
    const query = pkg ? `?package=${encodeURIComponent(pkg)}` : "";
    return this.request(`/api/methods${query}`);
  }

  generate(methodId: string): Promise<{ review_id: string }> {
    return this.request("/api/generate", {
      method: "POST",
      body: JSON.stringify({ method_id: methodId }),
    });
  }

  reviews(): Promise<Review[]> {
    return this.request("/api/reviews");
  }

  review(id: string): Promise<Review> {
    return this.request(`/api/reviews/${encodeURIComponent(id)}`);
  }

  decide(id: string, decision: Decision, editedText?: string): Promise<Review> {
    return this.request(`/api/reviews/${encodeURIComponent(id)}/decision`, {
      method: "POST",
      body: JSON.stringify({ decision, edited_text: editedText ?? null }),
    });
  }

  feedback(payload: {
    rating: number;
    model: string;
    text?: string | null;
    review_id: string;
  }): Promise<Record<string, unknown>> {
    return this.request("/api/feedback", {
      method: "POST",
      body: JSON.stringify(payload),
    });
  }

  graph(methodId: string): Promise<GraphView> {
    return this.request(`/api/graph/${encodeURIComponent(methodId)}`);
  }
}
