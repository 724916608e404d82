/**
 * UI session state and the store that keeps it in sync with the server.
 *
 * The store owns all interaction logic so it is testable without a DOM:
 * panel submission, suggestion card decisions (debounced, never reverting a
 * decided card), the spell-check toggle, and the retryable error banner.
 */

import {
  ApiClient,
  ApiError,
  CodeTarget,
  ObjectSpec,
  PanelCategory,
  SpellFlag,
  SubmitReport,
  Suggestion,
} from "./api.js";

export interface CardView extends Suggestion {
  deciding: boolean;
}

export interface UiSessionState {
  sessionId: string | null;
  panels: Record<PanelCategory, string>;
  codeTarget: CodeTarget;
  code: string;
  cards: CardView[];
  decided: Record<string, "accepted" | "rejected">;
  diagnostics: string[];
  spellcheckOn: boolean;
  spellFlags: Record<PanelCategory, SpellFlag[]>;
  banner: string | null;
  synced: boolean;
}

export interface KeyValueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const SPELL_TOGGLE_KEY = "nl2domain.spellcheck";
const PANEL_CATEGORIES: PanelCategory[] = ["state", "affordance", "affect"];

function emptyFlags(): Record<PanelCategory, SpellFlag[]> {
  return { state: [], affordance: [], affect: [] };
}

export function initialState(storage?: KeyValueStorage): UiSessionState {
  return {
    sessionId: null,
    panels: { state: "", affordance: "", affect: "" },
    codeTarget: "sexpr",
    code: "",
    cards: [],
    decided: {},
    diagnostics: [],
    spellcheckOn: storage?.getItem(SPELL_TOGGLE_KEY) === "on",
    spellFlags: emptyFlags(),
    banner: null,
    synced: true,
  };
}

export class AuthoringStore {
  state: UiSessionState;
  private listeners: Array<(s: UiSessionState) => void> = [];

  constructor(
    private readonly api: ApiClient,
    private readonly storage?: KeyValueStorage,
  ) {
    this.state = initialState(storage);
  }

  subscribe(listener: (s: UiSessionState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(partial: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  private mergeCards(incoming: Suggestion[]): CardView[] {
    // a decided card never reverts to pending, whatever the server says
    return incoming
      .filter((s) => !(s.id in this.state.decided))
      .map((s) => ({ ...s, deciding: false }));
  }

  async start(objects: ObjectSpec[] = []): Promise<void> {
    const sessionId = await this.api.createSession(objects);
    await this.attach(sessionId);
  }

  /** Re-attach to an existing session (the "Load" control). */
  async attach(sessionId: string): Promise<void> {
    this.update({ sessionId, decided: {}, diagnostics: [], banner: null });
    await this.refreshCode();
    const suggestions = await this.api.getSuggestions(sessionId);
    this.update({ cards: this.mergeCards(suggestions), synced: true });
  }

  setPanelText(category: PanelCategory, text: string): void {
    this.update({
      panels: { ...this.state.panels, [category]: text },
      synced: false,
    });
  }

  setCodeTarget(target: CodeTarget): Promise<void> {
    this.update({ codeTarget: target });
    return this.refreshCode();
  }

  async refreshCode(): Promise<void> {
    if (!this.state.sessionId) return;
    const code = await this.api.getCode(this.state.sessionId, this.state.codeTarget);
    this.update({ code });
  }

  /** Submit one panel's text with its explicit category. */
  async panelSubmit(category: PanelCategory): Promise<SubmitReport | null> {
    const text = this.state.panels[category];
    if (!this.state.sessionId || !text.trim()) {
      return null; // empty text: no request at all
    }
    try {
      const report = await this.api.submitText(this.state.sessionId, text, category);
      const diagnostics = report.sentences
        .filter((s) => s.status !== "ok")
        .map((s) => `${s.sentence} — ${s.error ?? s.diagnostics.join("; ")}`);
      this.update({
        diagnostics,
        cards: this.mergeCards(report.suggestions),
        banner: null,
        synced: true,
      });
      await this.refreshCode();
      if (this.state.spellcheckOn) await this.runSpellcheck();
      return report;
    } catch (err) {
      if (err instanceof ApiError && err.retryable) {
        // panels keep their text; the author can retry
        this.update({ banner: `request failed (${err.message}); retry` });
        return null;
      }
      throw err;
    }
  }

  /** Accept or reject a card; duplicate clicks while in flight are dropped. */
  async cardDecide(id: string, accept: boolean): Promise<void> {
    const card = this.state.cards.find((c) => c.id === id);
    if (!card || card.deciding || id in this.state.decided) return;
    this.update({
      cards: this.state.cards.map((c) =>
        c.id === id ? { ...c, deciding: true } : c,
      ),
    });
    try {
      const report = await this.api.decideSuggestion(
        this.state.sessionId!,
        id,
        accept,
      );
      this.update({
        decided: { ...this.state.decided, [id]: accept ? "accepted" : "rejected" },
      });
      this.update({ cards: this.mergeCards(report.suggestions) });
      if (accept) await this.refreshCode();
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        // stale card: already decided server-side -> adopt the server status
        this.update({
          decided: { ...this.state.decided, [id]: accept ? "accepted" : "rejected" },
        });
        const suggestions = await this.api.getSuggestions(this.state.sessionId!);
        this.update({ cards: this.mergeCards(suggestions) });
        return;
      }
      throw err;
    }
  }

  /** Turn spell checking on or off; the toggle persists locally. */
  async toggleSpellcheck(on: boolean): Promise<void> {
    this.storage?.setItem(SPELL_TOGGLE_KEY, on ? "on" : "off");
    this.update({ spellcheckOn: on });
    if (!on) {
      this.update({ spellFlags: emptyFlags() });
      return;
    }
    await this.runSpellcheck();
  }

  private async runSpellcheck(): Promise<void> {
    const flags = emptyFlags();
    for (const category of PANEL_CATEGORIES) {
      const text = this.state.panels[category];
      if (!text.trim()) continue;
      flags[category] = await this.api.spellcheck(
        text,
        this.state.sessionId ?? undefined,
      );
    }
    this.update({ spellFlags: flags });
  }

  /** Replace a flagged token in a panel with a chosen candidate. */
  applyCorrection(category: PanelCategory, flag: SpellFlag, candidate: string): void {
    const text = this.state.panels[category];
    const next =
      text.slice(0, flag.offset) +
      candidate +
      text.slice(flag.offset + flag.token.length);
    this.setPanelText(category, next);
    this.update({
      spellFlags: {
        ...this.state.spellFlags,
        [category]: this.state.spellFlags[category].filter((f) => f !== flag),
      },
    });
  }
}
