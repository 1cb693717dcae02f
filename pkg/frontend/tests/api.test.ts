import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

function mockFetch(status: number, body: unknown) {
  const impl = vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  }));
  vi.stubGlobal("fetch", impl);
  return impl;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("ApiClient", () => {
  it("GETs the catalog from the base url", async () => {
    const impl = mockFetch(200, { name: "cat", version: "1" });
    const client = new ApiClient("http://svc:1234");
    const doc = await client.getCatalog();
    expect(doc.name).toBe("cat");
    expect(impl).toHaveBeenCalledWith(
      "http://svc:1234/api/catalog",
      expect.objectContaining({ method: "GET" }),
    );
  });

  it("PUTs merged scores as a JSON body", async () => {
    const impl = mockFetch(200, { draft_scores: {}, report: {} });
    const client = new ApiClient("");
    await client.putScores("s1", { "org.allocation.q1": 4 });
    const [url, options] = impl.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("/api/sessions/s1/scores");
    expect(options.method).toBe("PUT");
    expect(JSON.parse(options.body as string)).toEqual({ "org.allocation.q1": 4 });
    expect((options.headers as Record<string, string>)["Content-Type"]).toBe(
      "application/json",
    );
  });

  it("raises ApiError with the service's machine code", async () => {
    mockFetch(422, {
      error: {
        code: "validation_failed",
        message: "score out of range",
        details: { leaf_id: "org.allocation.q1" },
      },
    });
    const client = new ApiClient("");
    const failure = await client.putScores("s1", { "org.allocation.q1": 9 }).catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(422);
    expect(failure.code).toBe("validation_failed");
    expect(failure.details).toEqual({ leaf_id: "org.allocation.q1" });
  });

  it("survives non-JSON error bodies", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn(async () => ({
        ok: false,
        status: 502,
        json: async () => {
          throw new Error("not json");
        },
      })),
    );
    const client = new ApiClient("");
    const failure = await client.getCatalog().catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(502);
    expect(failure.code).toBe("internal");
  });

  it("builds experiment and histogram query strings", async () => {
    const impl = mockFetch(200, { level: "domain", bars: [] });
    const client = new ApiClient("");
    await client.getHistogram("s1", "domain", 2);
    expect(impl.mock.calls[0][0]).toBe(
      "/api/sessions/s1/histogram?level=domain&experiment=2",
    );
    await client.getHistogram("s1", "control");
    expect(impl.mock.calls[1][0]).toBe("/api/sessions/s1/histogram?level=control");
  });
});
