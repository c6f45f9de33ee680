/** HttpApi wire behavior: URLs, verbs, bodies, and error envelopes. */

import { describe, expect, it, vi } from "vitest";

import { ApiRequestError, HttpApi } from "../src/api.js";
import type { ApiErrorBody } from "../src/types.js";
import { loadFixture } from "./helpers.js";

const ENCODE_SIGNATURE = "org.owasp.esapi.Encoder.encodeForSQL(Codec,String)";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function apiWith(response: Response) {
  const fetchFn = vi.fn(async (_input: RequestInfo | URL, _init?: RequestInit) => response);
  return { api: new HttpApi("", fetchFn as unknown as typeof fetch), fetchFn };
}

describe("HttpApi", () => {
  it("lists methods and unwraps the envelope", async () => {
    const payload = loadFixture<object>("methods_sanitizer.json");
    const { api, fetchFn } = apiWith(jsonResponse(payload));

    const rows = await api.listMethods();

    expect(fetchFn).toHaveBeenCalledWith("/api/methods", {
      method: "GET",
      headers: undefined,
      body: undefined,
    });
    expect(rows.length).toBeGreaterThan(0);
    expect(rows.every((row) => row.labels.includes("sanitizer"))).toBe(true);
  });

  it("encodes list filters as query parameters", async () => {
    const { api, fetchFn } = apiWith(jsonResponse({ methods: [] }));

    await api.listMethods({ label: "sanitizer", discovery: "training" });

    const [url] = fetchFn.mock.calls[0]!;
    expect(url).toBe("/api/methods?label=sanitizer&discovery=training");
  });

  it("patches a method with a JSON body at the signature path", async () => {
    const row = loadFixture<object>("method_encode_cleared.json");
    const { api, fetchFn } = apiWith(jsonResponse(row));

    const saved = await api.patchMethod(ENCODE_SIGNATURE, { labels: [] });

    const [url, init] = fetchFn.mock.calls[0]!;
    expect(url).toBe(`/api/methods/${ENCODE_SIGNATURE}`);
    expect(init).toMatchObject({
      method: "PATCH",
      headers: { "Content-Type": "application/json" },
    });
    expect(JSON.parse(init?.body as string)).toEqual({ labels: [] });
    expect(saved.discovery).toBe("manual");
  });

  it("posts jobs as {kind, config}", async () => {
    const job = loadFixture<object>("job_created.json");
    const { api, fetchFn } = apiWith(jsonResponse(job));

    await api.submitJob("pipeline");

    const [url, init] = fetchFn.mock.calls[0]!;
    expect(url).toBe("/api/jobs");
    expect(JSON.parse(init?.body as string)).toEqual({
      kind: "pipeline",
      config: {},
    });
  });

  it("rejects non-2xx responses with the service's error envelope", async () => {
    const envelope = loadFixture<ApiErrorBody>("error_bad_datain.json");
    const { api } = apiWith(jsonResponse(envelope, 422));

    const failure = api.patchMethod(ENCODE_SIGNATURE, { dataIn: [7] });

    await expect(failure).rejects.toBeInstanceOf(ApiRequestError);
    await expect(failure).rejects.toMatchObject({
      status: 422,
      body: { code: "validation", path: "/dataIn" },
    });
  });

  it("synthesizes an envelope when the error body is not JSON", async () => {
    const { api } = apiWith(new Response("boom", { status: 500 }));

    await expect(api.getStats()).rejects.toMatchObject({
      status: 500,
      body: { code: "http", message: "HTTP 500" },
    });
  });

  it("builds the SARIF download href from the base URL", () => {
    expect(new HttpApi("").sarifUrl()).toBe("/api/export/sarif");
    expect(new HttpApi("http://reviewer:8080").sarifUrl()).toBe(
      "http://reviewer:8080/api/export/sarif",
    );
  });
});
