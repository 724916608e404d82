/**
 * DOM wiring: character entry, three input panels, code panel, suggestion
 * cards, spell-check toggle, and the error surfaces.  All logic lives in
 * AuthoringStore; this module only renders state and forwards events.
 */

import { ApiClient, PanelCategory, SpellFlag } from "./api.js";
import { AuthoringStore, UiSessionState } from "./state.js";

const PANELS: Array<{ category: PanelCategory; title: string; hint: string }> = [
  { category: "state", title: "States", hint: "Max can go to different places such as restaurants and parks." },
  { category: "affordance", title: "Affordances", hint: "Max goes to the library only if he has an exam after which he feels more knowledgeable." },
  { category: "affect", title: "Mood, emotion and motivation rules", hint: "Max will get extremely angry whenever he fails his exams." },
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Array<Node | string>
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) {
    if (k === "class") node.className = v;
    else node.setAttribute(k, v);
  }
  node.append(...children);
  return node;
}

function highlighted(text: string, flags: SpellFlag[],
                     onPick: (flag: SpellFlag, candidate: string) => void): Node {
  if (!flags.length) return document.createTextNode(text);
  const frag = document.createDocumentFragment();
  let cursor = 0;
  for (const flag of [...flags].sort((a, b) => a.offset - b.offset)) {
    frag.append(text.slice(cursor, flag.offset));
    const mark = el("mark", { class: "misspelled", title: flag.candidates.join(", ") },
                    flag.token);
    mark.addEventListener("click", () => {
      if (flag.candidates.length) onPick(flag, flag.candidates[0]);
    });
    frag.append(mark);
    cursor = flag.offset + flag.token.length;
  }
  frag.append(text.slice(cursor));
  return frag;
}

export function mountApp(root: HTMLElement, store: AuthoringStore): void {
  root.innerHTML = "";

  // -- character entry and session controls (New / Load / Save) --------------
  const nameInput = el("input", { placeholder: "character name, e.g. Max" });
  const typeInput = el("input", { placeholder: "type, e.g. dog" });
  const startBtn = el("button", {}, "New character");
  startBtn.addEventListener("click", () => {
    const name = nameInput.value.trim();
    void store.start(name ? [{ name, type: typeInput.value.trim() }] : []);
  });
  const sessionInput = el("input", { placeholder: "session id" });
  const loadBtn = el("button", {}, "Load");
  loadBtn.addEventListener("click", () => {
    const id = sessionInput.value.trim();
    if (id) void store.attach(id);
  });
  const saveBtn = el("button", {}, "Save code");
  saveBtn.addEventListener("click", () => {
    const blob = new Blob([store.state.code], { type: "text/plain" });
    const a = el("a", {
      href: URL.createObjectURL(blob),
      download: `domain.${store.state.codeTarget}`,
    });
    a.click();
    URL.revokeObjectURL(a.href);
  });
  const header = el("div", { class: "character-entry" },
                    nameInput, typeInput, startBtn,
                    sessionInput, loadBtn, saveBtn);

  // -- input panels -----------------------------------------------------------
  const panelBoxes: Partial<Record<PanelCategory, HTMLTextAreaElement>> = {};
  const overlayBoxes: Partial<Record<PanelCategory, HTMLElement>> = {};
  const panelsColumn = el("div", { class: "panels" });
  for (const { category, title, hint } of PANELS) {
    const area = el("textarea", { rows: "5", placeholder: hint });
    area.addEventListener("input", () => store.setPanelText(category, area.value));
    const submit = el("button", {}, `Compile ${title.toLowerCase()}`);
    submit.addEventListener("click", () => void store.panelSubmit(category));
    const overlay = el("div", { class: "spell-overlay" });
    panelBoxes[category] = area;
    overlayBoxes[category] = overlay;
    panelsColumn.append(el("section", { class: "panel" },
                           el("h3", {}, title), area, overlay, submit));
  }

  // -- code panel --------------------------------------------------------------
  const codeView = el("pre", { class: "code" });
  const targetToggle = el("select", {},
                          el("option", { value: "sexpr" }, "s-expression"),
                          el("option", { value: "pddl" }, "PDDL"));
  targetToggle.addEventListener("change", () =>
    void store.setCodeTarget(targetToggle.value as "sexpr" | "pddl"));
  const spellToggle = el("input", { type: "checkbox" });
  spellToggle.addEventListener("change", () =>
    void store.toggleSpellcheck(spellToggle.checked));

  // -- suggestions and errors ---------------------------------------------------
  const cardsColumn = el("div", { class: "cards" });
  const diagnosticsBox = el("div", { class: "diagnostics" });
  const banner = el("div", { class: "banner" });

  root.append(
    header,
    banner,
    el("div", { class: "columns" },
       panelsColumn,
       el("div", { class: "output" },
          el("label", {}, "Target ", targetToggle),
          el("label", {}, " Spell check ", spellToggle),
          codeView,
          diagnosticsBox),
       cardsColumn),
  );

  store.subscribe((state: UiSessionState) => {
    codeView.textContent = state.code;
    banner.textContent = state.banner ?? "";
    banner.style.display = state.banner ? "block" : "none";
    spellToggle.checked = state.spellcheckOn;
    if (state.sessionId && sessionInput.value !== state.sessionId) {
      sessionInput.value = state.sessionId;
    }

    diagnosticsBox.innerHTML = "";
    for (const d of state.diagnostics) {
      diagnosticsBox.append(el("p", { class: "diagnostic" }, d));
    }

    for (const { category } of PANELS) {
      const overlay = overlayBoxes[category]!;
      overlay.innerHTML = "";
      const flags = state.spellFlags[category];
      if (state.spellcheckOn && flags.length) {
        overlay.append(highlighted(
          state.panels[category], flags,
          (flag, candidate) => {
            store.applyCorrection(category, flag, candidate);
            panelBoxes[category]!.value = store.state.panels[category];
          }));
      }
    }

    cardsColumn.innerHTML = "";
    for (const card of state.cards) {
      const accept = el("button", { class: "accept" }, "Accept");
      const reject = el("button", { class: "reject" }, "Reject");
      accept.addEventListener("click", () => void store.cardDecide(card.id, true));
      reject.addEventListener("click", () => void store.cardDecide(card.id, false));
      if (card.deciding) {
        accept.setAttribute("disabled", "disabled");
        reject.setAttribute("disabled", "disabled");
      }
      cardsColumn.append(el("div", { class: "card" },
                            el("p", {}, card.prompt),
                            el("small", {}, `${card.kind} · ${card.score.toFixed(2)}`),
                            el("div", { class: "card-actions" }, accept, reject)));
    }
  });
}

export function bootstrap(): void {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "";
  const store = new AuthoringStore(new ApiClient(base), window.localStorage);
  mountApp(document.getElementById("app")!, store);
}
