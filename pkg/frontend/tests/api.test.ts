import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { FakeBackend, fixtures } from "./fake_backend.js";

describe("ApiClient", () => {
  it("creates sessions and returns the id", async () => {
    const backend = new FakeBackend();
    const api = new ApiClient("", backend.fetch);
    const sid = await api.createSession([{ name: "max", type: "dog" }]);
    expect(sid).toBe(backend.sessionId);
    expect(backend.log[0]).toMatchObject({ method: "POST", path: "/sessions" });
  });

  it("fetches code as plain text", async () => {
    const backend = new FakeBackend();
    const api = new ApiClient("", backend.fetch);
    const sid = await api.createSession();
    backend.submitted = true;
    const code = await api.getCode(sid, "sexpr");
    expect(code).toBe(fixtures.code_before_accept);
  });

  it("maps HTTP errors to ApiError with retryability", async () => {
    const backend = new FakeBackend();
    backend.failNextSubmit = true;
    const api = new ApiClient("", backend.fetch);
    const sid = await api.createSession();
    await expect(api.submitText(sid, "x", "state")).rejects.toMatchObject({
      name: "ApiError",
      status: 500,
      retryable: true,
    });
  });

  it("maps network failures to retryable errors", async () => {
    const api = new ApiClient("", () => Promise.reject(new Error("offline")));
    await expect(api.createSession()).rejects.toSatisfy(
      (e: unknown) => e instanceof ApiError && e.retryable);
  });

  it("422 responses are not retryable", async () => {
    const backend = new FakeBackend();
    backend.accepted = true;
    const api = new ApiClient("", backend.fetch);
    const sid = await api.createSession();
    await expect(
      api.decideSuggestion(sid, fixtures.capability_card_id, true),
    ).rejects.toMatchObject({ status: 422, retryable: false });
  });
});
