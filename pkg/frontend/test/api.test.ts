import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, CbirApi } from "../src/api.js";

const QUERY_BODY = {
  results: [{ id: "a.png", distance: 0, rank: 1 }],
  candidates_examined: 3,
  mode: "clustered",
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("CbirApi", () => {
  it("queryByUpload posts multipart field 'image' with k and mode", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(QUERY_BODY));
    vi.stubGlobal("fetch", fetchMock);

    const api = new CbirApi("http://host");
    const blob = new Blob([new Uint8Array([1, 2, 3])], { type: "image/png" });
    const result = await api.queryByUpload(blob, 7, "exhaustive");

    expect(fetchMock).toHaveBeenCalledTimes(1);
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("http://host/api/query?k=7&mode=exhaustive");
    expect(init.method).toBe("POST");
    expect(init.body).toBeInstanceOf(FormData);
    expect((init.body as FormData).get("image")).toBeInstanceOf(Blob);
    expect(result).toEqual(QUERY_BODY);
  });

  it("queryById hits the query-by-id endpoint with one request", async () => {
    const fetchMock = vi.fn().mockResolvedValue(jsonResponse(QUERY_BODY));
    vi.stubGlobal("fetch", fetchMock);

    const api = new CbirApi();
    await api.queryById("red_low_000.png", 10, "clustered");

    expect(fetchMock).toHaveBeenCalledTimes(1);
    expect(fetchMock.mock.calls[0]![0]).toBe(
      "/api/query-by-id/red_low_000.png?k=10&mode=clustered",
    );
  });

  it("stats parses the summary payload", async () => {
    const body = { entries: 1, groups: {}, classes: {}, config_echo: {} };
    vi.stubGlobal("fetch", vi.fn().mockResolvedValue(jsonResponse(body)));
    expect(await new CbirApi().stats()).toEqual(body);
  });

  it("maps API error bodies onto ApiError", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(
        jsonResponse({ code: "unknown-id", message: "ghost.png missing" }, 404),
      ),
    );
    const error = await new CbirApi().queryById("ghost.png", 5, "clustered").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(404);
    expect(error.code).toBe("unknown-id");
    expect(error.message).toBe("ghost.png missing");
  });

  it("falls back to the HTTP status for non-JSON error bodies", async () => {
    vi.stubGlobal(
      "fetch",
      vi.fn().mockResolvedValue(new Response("boom", { status: 500 })),
    );
    const error = await new CbirApi().stats().catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.code).toBe("http-500");
  });

  it("imageUrl resolves ids against the base URL", () => {
    expect(new CbirApi("http://h:9").imageUrl("a b.png")).toBe(
      "http://h:9/api/image/a%20b.png",
    );
  });
});
