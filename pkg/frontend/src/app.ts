// Console wiring: scene/region pickers, statement box, map, verdict
// panel, and per-region history.  At most one /ground call is in
// flight; the form is disabled while waiting.

import { ApiClient, ApiError, isParseFailure } from "./api";
import { RegionMap } from "./map";
import { ConsoleSession, type HistoryEntry } from "./session";
import type { AlternativeDoc, SceneEntry } from "./types";
import { renderParseFailure, renderVerdict } from "./verdict";

const SHELL = `
  <header>
    <h1>refground console</h1>
    <div class="pickers">
      <label>scene <select class="scene-select"></select></label>
      <label>region <select class="region-select"></select></label>
    </div>
  </header>
  <div class="banner" role="alert" hidden></div>
  <main>
    <section class="map-panel"></section>
    <section class="side">
      <form class="statement-form">
        <input class="statement-input" type="text"
               placeholder="the red cup on the table" autocomplete="off">
        <button class="submit" type="submit">ground</button>
      </form>
      <div class="verdict-panel"></div>
      <h2>history</h2>
      <ul class="history"></ul>
    </section>
  </main>
`;

export interface ConsoleHandle {
  ready: Promise<void>;
  viewRegion(sceneId: string, regionId: string): Promise<void>;
  submit(text: string): Promise<void>;
  session(): ConsoleSession | null;
  root: HTMLElement;
}

export function mountConsole(root: HTMLElement, baseUrl: string): ConsoleHandle {
  const api = new ApiClient(baseUrl);
  root.classList.add("console");
  root.innerHTML = SHELL;

  const sceneSelect = root.querySelector<HTMLSelectElement>(".scene-select")!;
  const regionSelect = root.querySelector<HTMLSelectElement>(".region-select")!;
  const banner = root.querySelector<HTMLElement>(".banner")!;
  const form = root.querySelector<HTMLFormElement>(".statement-form")!;
  const input = root.querySelector<HTMLInputElement>(".statement-input")!;
  const submitButton = root.querySelector<HTMLButtonElement>(".submit")!;
  const verdictPanel = root.querySelector<HTMLElement>(".verdict-panel")!;
  const historyList = root.querySelector<HTMLUListElement>(".history")!;
  const map = new RegionMap(root.querySelector<HTMLElement>(".map-panel")!);

  let scenes: SceneEntry[] = [];
  let session: ConsoleSession | null = null;
  let busy = false;

  function showError(message: string): void {
    banner.textContent = message;
    banner.hidden = false;
  }

  function clearError(): void {
    banner.hidden = true;
    banner.textContent = "";
  }

  function setBusy(value: boolean): void {
    busy = value;
    input.disabled = value;
    submitButton.disabled = value;
    for (const b of verdictPanel.querySelectorAll<HTMLButtonElement>("button.accept")) {
      b.disabled = value;
    }
  }

  function fillRegionOptions(sceneId: string): void {
    const entry = scenes.find((s) => s.scene_id === sceneId);
    regionSelect.replaceChildren();
    for (const rid of entry ? entry.regions : []) {
      const opt = document.createElement("option");
      opt.value = rid;
      opt.textContent = rid;
      regionSelect.appendChild(opt);
    }
  }

  function renderHistory(): void {
    historyList.replaceChildren();
    if (!session) return;
    for (const entry of session.history) {
      historyList.appendChild(historyItem(entry));
    }
  }

  function historyItem(entry: HistoryEntry): HTMLLIElement {
    const item = document.createElement("li");
    const outcome = entry.verdict.exists
      ? `-> ${entry.verdict.object_id}`
      : "-> not found";
    item.textContent = `"${entry.statement}" ${outcome}`;
    if (entry.accepted) {
      const chosen = document.createElement("span");
      chosen.className = "accepted-alt";
      chosen.textContent = ` (accepted: "${entry.accepted.statement}")`;
      item.appendChild(chosen);
    }
    return item;
  }

  async function viewRegion(sceneId: string, regionId: string): Promise<void> {
    clearError();
    try {
      const graph = await api.graph(sceneId, regionId);
      map.render(graph);
    } catch (err) {
      showError(err instanceof ApiError ? err.message : String(err));
      return;
    }
    session = new ConsoleSession(sceneId, regionId);
    sceneSelect.value = sceneId;
    if (regionSelect.value !== regionId) {
      fillRegionOptions(sceneId);
      regionSelect.value = regionId;
    }
    verdictPanel.replaceChildren();
    renderHistory();
  }

  function accept(entry: HistoryEntry, alt: AlternativeDoc): void {
    entry.accepted = alt;
    void submit(alt.statement);
  }

  async function submit(text: string): Promise<void> {
    const statement = text.trim();
    if (busy || !session || statement === "") return;
    const current = session;
    clearError();
    setBusy(true);
    try {
      const verdict = await api.ground(current.sceneId, current.regionId, statement);
      const entry = current.record(statement, verdict);
      renderVerdict(verdictPanel, statement, verdict, (alt) => accept(entry, alt));
      map.highlight(verdict.exists ? verdict.object_id : null);
      renderHistory();
    } catch (err) {
      if (isParseFailure(err)) {
        renderParseFailure(verdictPanel, statement, err.detail);
        map.highlight(null);
      } else {
        showError(err instanceof ApiError ? err.message : String(err));
      }
    } finally {
      setBusy(false);
    }
  }

  sceneSelect.addEventListener("change", () => {
    fillRegionOptions(sceneSelect.value);
    const first = regionSelect.options[0];
    if (first) void viewRegion(sceneSelect.value, first.value);
  });
  regionSelect.addEventListener("change", () => {
    void viewRegion(sceneSelect.value, regionSelect.value);
  });
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit(input.value);
  });

  const ready = (async () => {
    scenes = await api.scenes();
    sceneSelect.replaceChildren();
    for (const entry of scenes) {
      const opt = document.createElement("option");
      opt.value = entry.scene_id;
      opt.textContent = entry.scene_id;
      sceneSelect.appendChild(opt);
    }
    const first = scenes[0];
    if (first && first.regions.length > 0) {
      fillRegionOptions(first.scene_id);
      await viewRegion(first.scene_id, first.regions[0]);
    }
  })().catch((err) => {
    showError(err instanceof ApiError ? err.message : String(err));
  });

  return { ready, viewRegion, submit, session: () => session, root };
}
