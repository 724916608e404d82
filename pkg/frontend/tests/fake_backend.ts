/**
 * In-memory double of the authoring service, seeded with responses recorded
 * from the real server (tests/fixtures/recorded.json).  It tracks every
 * request so tests can assert the UI issues only documented calls.
 */

import type { FetchLike } from "../src/api.js";
import recorded from "./fixtures/recorded.json";

export interface RequestLogEntry {
  method: string;
  path: string;
  body?: unknown;
}

export const fixtures = recorded as {
  table1_text: string;
  submit_report: { sentences: unknown[]; new_states: string[]; suggestions: Array<{ id: string; prompt: string; kind: string; score: number; status: string }> };
  code_before_accept: string;
  pddl_before_accept: string;
  suggestions: Array<{ id: string; prompt: string; kind: string; score: number; status: string }>;
  capability_card_id: string;
  decide_report: { sentences: unknown[]; new_states: string[]; suggestions: unknown[] };
  code_after_accept: string;
  spellcheck_libary: { flags: Array<{ token: string; offset: number; candidates: string[] }> };
  spellcheck_clean: { flags: unknown[] };
};

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function text(body: string, status = 200): Response {
  return new Response(body, { status, headers: { "Content-Type": "text/plain" } });
}

export class FakeBackend {
  log: RequestLogEntry[] = [];
  submitted = false;
  accepted = false;
  failNextSubmit = false;
  nextSubmitReport: unknown = null;
  sessionId = "fake-session-1";

  fetch: FetchLike = async (input, init) => {
    const url = new URL(input, "http://fake");
    const method = (init?.method ?? "GET").toUpperCase();
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    this.log.push({ method, path: url.pathname + url.search, body });
    return this.route(method, url, body);
  };

  private route(method: string, url: URL, body: any): Response {
    const path = url.pathname;
    if (method === "POST" && path === "/sessions") {
      return json({ session_id: this.sessionId });
    }
    if (method === "POST" && path === `/sessions/${this.sessionId}/text`) {
      if (this.failNextSubmit) {
        this.failNextSubmit = false;
        return json({ detail: "internal error" }, 500);
      }
      this.submitted = true;
      if (this.nextSubmitReport !== null) {
        const report = this.nextSubmitReport;
        this.nextSubmitReport = null;
        return json(report);
      }
      return json(fixtures.submit_report);
    }
    if (method === "GET" && path === `/sessions/${this.sessionId}/suggestions`) {
      const suggestions = this.accepted
        ? fixtures.decide_report.suggestions
        : this.submitted
          ? fixtures.submit_report.suggestions
          : fixtures.suggestions;
      return json({ suggestions });
    }
    if (method === "POST" &&
        path === `/sessions/${this.sessionId}/suggestions/${fixtures.capability_card_id}/accept`) {
      if (this.accepted) return json({ detail: "already accepted" }, 422);
      this.accepted = true;
      return json(fixtures.decide_report);
    }
    if (method === "POST" && /\/suggestions\/[^/]+\/(accept|reject)$/.test(path)) {
      return json({ sentences: [], new_states: [], suggestions: [] });
    }
    if (method === "GET" && path === `/sessions/${this.sessionId}/code`) {
      const target = url.searchParams.get("target") ?? "sexpr";
      if (target === "pddl") return text(fixtures.pddl_before_accept);
      return text(this.accepted ? fixtures.code_after_accept
                                : this.submitted ? fixtures.code_before_accept
                                                 : ";; empty\n");
    }
    if (method === "POST" && path === "/spellcheck") {
      const flags = typeof body?.text === "string" && body.text.includes("libary")
        ? fixtures.spellcheck_libary.flags
        : fixtures.spellcheck_clean.flags;
      return json({ flags });
    }
    return json({ detail: `no route for ${method} ${path}` }, 404);
  }
}
