import { afterEach, describe, expect, test, vi } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  test("encodes method ids in graph paths", async () => {
    const calls: string[] = [];
    vi.stubGlobal("fetch", async (url: string) => {
      calls.push(String(url));
      return jsonResponse({ root: "x", nodes: [], edges: [], back_edges: [], schedule: [] });
    });
    const client = new ApiClient("");
    await client.graph("com.acme.app.Pipeline#process/1");
    expect(calls[0]).toBe(
      "/api/graph/com.acme.app.Pipeline%23process%2F1",
    );
  });

  test("generate posts the method id", async () => {
    let captured: RequestInit | undefined;
    vi.stubGlobal("fetch", async (_url: string, init?: RequestInit) => {
      captured = init;
      return jsonResponse({ review_id: "r1" });
    });
    const client = new ApiClient("");
    const out = await client.generate("a.B#m/0");
    expect(out.review_id).toBe("r1");
    expect(JSON.parse(String(captured?.body))).toEqual({ method_id: "a.B#m/0" });
  });

  test("non-2xx surfaces ApiError with detail", async () => {
    vi.stubGlobal("fetch", async () => jsonResponse({ detail: "invalid JavaDoc" }, 422));
    const client = new ApiClient("");
    await expect(client.decide("r1", "edit", "junk")).rejects.toMatchObject({
      name: "ApiError",
      status: 422,
      detail: "invalid JavaDoc",
    });
  });

  test("package filter is querystring-encoded", async () => {
    const calls: string[] = [];
    vi.stubGlobal("fetch", async (url: string) => {
      calls.push(String(url));
      return jsonResponse([]);
    });
    await new ApiClient("http://h").methods("com.acme.text");
    expect(calls[0]).toBe("http://h/api/methods?package=com.acme.text");
  });

  test("ApiError message includes status", () => {
    const err = new ApiError(409, "stale file");
    expect(err.message).toContain("409");
    expect(err.message).toContain("stale file");
  });
});
