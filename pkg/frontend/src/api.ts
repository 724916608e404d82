/**
 * Typed client for the authoring service HTTP API.
 *
 * The UI issues only these documented calls; every extraction decision is
 * observable through them alone.
 */

export type PanelCategory = "state" | "affordance" | "affect";
export type CodeTarget = "sexpr" | "pddl";

export interface SentenceOutcome {
  sentence: string;
  category: string;
  status: "ok" | "unmatched" | "error";
  new_states: string[];
  matched_states: string[];
  affordance: string | null;
  rule_added: boolean;
  error: string | null;
  diagnostics: string[];
}

export interface Suggestion {
  id: string;
  kind: string;
  prompt: string;
  score: number;
  status: string;
  payload?: Record<string, unknown>;
}

export interface SubmitReport {
  sentences: SentenceOutcome[];
  new_states: string[];
  suggestions: Suggestion[];
}

export interface SpellFlag {
  token: string;
  offset: number;
  candidates: string[];
}

export interface ObjectSpec {
  name: string;
  type?: string;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(message: string, readonly status: number, readonly retryable: boolean) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = `${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    /* non-JSON error body */
  }
  return new ApiError(detail, response.status, response.status >= 500);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(`network failure: ${String(err)}`, 0, true);
    }
    if (!response.ok) throw await parseError(response);
    return response;
  }

  private async postJson(path: string, body: unknown): Promise<Response> {
    return this.request(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async createSession(objects: ObjectSpec[] = []): Promise<string> {
    const r = await this.postJson("/sessions", { objects });
    const data = (await r.json()) as { session_id: string };
    return data.session_id;
  }

  async submitText(
    sessionId: string,
    text: string,
    category?: PanelCategory,
  ): Promise<SubmitReport> {
    const body: Record<string, unknown> = { text };
    if (category) body.category = category;
    const r = await this.postJson(`/sessions/${sessionId}/text`, body);
    return (await r.json()) as SubmitReport;
  }

  async getSuggestions(sessionId: string): Promise<Suggestion[]> {
    const r = await this.request(`/sessions/${sessionId}/suggestions`);
    const data = (await r.json()) as { suggestions: Suggestion[] };
    return data.suggestions;
  }

  async decideSuggestion(
    sessionId: string,
    suggestionId: string,
    accept: boolean,
  ): Promise<SubmitReport> {
    const action = accept ? "accept" : "reject";
    const r = await this.postJson(
      `/sessions/${sessionId}/suggestions/${suggestionId}/${action}`,
      {},
    );
    return (await r.json()) as SubmitReport;
  }

  async getCode(sessionId: string, target: CodeTarget): Promise<string> {
    const r = await this.request(`/sessions/${sessionId}/code?target=${target}`);
    return r.text();
  }

  async spellcheck(text: string, sessionId?: string): Promise<SpellFlag[]> {
    const body: Record<string, unknown> = { text };
    if (sessionId) body.session_id = sessionId;
    const r = await this.postJson("/spellcheck", body);
    const data = (await r.json()) as { flags: SpellFlag[] };
    return data.flags;
  }
}
