// Drives the mounted console against a live service on the fixture
// dataset: real fetches, real DOM, no mocks.

import { beforeEach, describe, expect, it } from "vitest";

import { mountConsole, type ConsoleHandle } from "../src/app";
import type { GraphDoc, GroundMiss } from "../src/types";

const BASE = process.env.REFGROUND_TEST_API ?? "http://127.0.0.1:8765";
const SCENE = "synth_000";
const REGION = "r0";

// committed statement pair for the fixture dataset (seed 0)
const PERFECT = { text: "the green box on the floor", objectId: "box_0_1" };
const IMPERFECT = { text: "the orange box on the floor" };

async function eventually(check: () => void, timeout = 10_000): Promise<void> {
  const deadline = Date.now() + timeout;
  for (;;) {
    try {
      check();
      return;
    } catch (err) {
      if (Date.now() > deadline) throw err;
    }
    await new Promise((r) => setTimeout(r, 50));
  }
}

async function mount(): Promise<ConsoleHandle> {
  document.body.innerHTML = '<div id="root"></div>';
  const handle = mountConsole(document.getElementById("root")!, BASE);
  await handle.ready;
  await handle.viewRegion(SCENE, REGION);
  return handle;
}

function submitThroughForm(handle: ConsoleHandle, text: string): void {
  const input = handle.root.querySelector<HTMLInputElement>(".statement-input")!;
  const form = handle.root.querySelector<HTMLFormElement>(".statement-form")!;
  input.value = text;
  form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
}

describe("grounding console", () => {
  let handle: ConsoleHandle;

  beforeEach(async () => {
    handle = await mount();
  });

  it("renders every node of the region once, spaces distinctly", async () => {
    const res = await fetch(`${BASE}/scenes/${SCENE}/regions/${REGION}/graph`);
    const graph = (await res.json()) as GraphDoc;
    expect(graph.nodes.length).toBeGreaterThan(0);

    for (const node of graph.nodes) {
      const polys = handle.root.querySelectorAll(
        `polygon.footprint[data-object-id="${node.id}"]`,
      );
      expect(polys, node.id).toHaveLength(1);
      const poly = polys[0]!;
      if (node.kind === "space") {
        expect(poly.classList.contains("space")).toBe(true);
        expect(poly.getAttribute("fill")).toBeNull();
      } else {
        expect(poly.classList.contains("object")).toBe(true);
        expect(poly.getAttribute("fill")).toMatch(/^hsl\(/);
      }
    }
    // scene picker carries the whole fixture inventory
    const options = handle.root.querySelectorAll(".scene-select option");
    expect(options.length).toBeGreaterThanOrEqual(2);
  });

  it("grounds the committed perfect statement and highlights its object", async () => {
    submitThroughForm(handle, PERFECT.text);
    await eventually(() => {
      const grounded = handle.root.querySelector(".grounded-id");
      expect(grounded?.textContent).toBe(PERFECT.objectId);
    });
    const highlighted = handle.root.querySelectorAll("polygon.footprint.highlight");
    expect(highlighted).toHaveLength(1);
    expect(highlighted[0]!.getAttribute("data-object-id")).toBe(PERFECT.objectId);

    const session = handle.session()!;
    expect(session.history).toHaveLength(1);
    expect(session.history[0]!.statement).toBe(PERFECT.text);
    expect(session.history[0]!.verdict.exists).toBe(true);
  });

  it("lists alternatives for the committed imperfect statement with the API's scores", async () => {
    const res = await fetch(`${BASE}/ground`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ scene_id: SCENE, region_id: REGION, statement: IMPERFECT.text }),
    });
    const direct = (await res.json()) as GroundMiss;
    expect(direct.exists).toBe(false);
    expect(direct.alternatives.length).toBeGreaterThanOrEqual(1);

    submitThroughForm(handle, IMPERFECT.text);
    await eventually(() => {
      expect(handle.root.querySelector(".verdict-miss")).not.toBeNull();
    });

    const rows = [...handle.root.querySelectorAll(".alternatives li")];
    expect(rows).toHaveLength(direct.alternatives.length);
    rows.forEach((row, i) => {
      const want = direct.alternatives[i]!;
      expect(row.querySelector(".alt-score")!.textContent).toBe(String(want.score));
      expect(row.querySelector(".alt-statement")!.textContent).toBe(want.statement);
      expect(row.getAttribute("data-object-id")).toBe(want.object_id);
    });
    const scores = direct.alternatives.map((a) => a.score);
    const sorted = [...scores].sort((a, b) => b - a);
    expect(scores).toEqual(sorted);
    expect(handle.root.querySelectorAll("polygon.footprint.highlight")).toHaveLength(0);
  });

  it("accepting an alternative re-grounds its statement and extends history", async () => {
    submitThroughForm(handle, IMPERFECT.text);
    await eventually(() => {
      expect(handle.root.querySelector(".alternatives li")).not.toBeNull();
    });
    const first = handle.root.querySelector<HTMLElement>(".alternatives li")!;
    const altStatement = first.querySelector(".alt-statement")!.textContent!;
    const altObject = first.getAttribute("data-object-id")!;
    first.querySelector<HTMLButtonElement>("button.accept")!.click();

    await eventually(() => {
      const grounded = handle.root.querySelector(".grounded-id");
      expect(grounded?.textContent).toBe(altObject);
    });
    const session = handle.session()!;
    expect(session.history).toHaveLength(2);
    expect(session.history[0]!.accepted?.statement).toBe(altStatement);
    expect(session.history[1]!.statement).toBe(altStatement);
    expect(session.history[1]!.verdict.exists).toBe(true);
    const highlighted = handle.root.querySelectorAll("polygon.footprint.highlight");
    expect(highlighted).toHaveLength(1);
    expect(highlighted[0]!.getAttribute("data-object-id")).toBe(altObject);
  });

  it("shows parse diagnostics for unparseable input and records nothing", async () => {
    submitThroughForm(handle, "wibble wobble sideways");
    await eventually(() => {
      expect(handle.root.querySelector(".verdict-parse-error")).not.toBeNull();
    });
    expect(handle.root.querySelector(".verdict-parse-error")!.textContent).toContain(
      "could not parse",
    );
    expect(handle.session()!.history).toHaveLength(0);
  });

  it("surfaces an error banner for an unknown region without crashing", async () => {
    await handle.viewRegion("no_such_scene", "r9");
    const banner = handle.root.querySelector<HTMLElement>(".banner")!;
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("404");
    // the old session survives; the form still works afterwards
    await handle.viewRegion(SCENE, REGION);
    expect(banner.hidden).toBe(true);
  });

  it("allows only one in-flight request, disabling the form meanwhile", async () => {
    submitThroughForm(handle, PERFECT.text);
    const input = handle.root.querySelector<HTMLInputElement>(".statement-input")!;
    const button = handle.root.querySelector<HTMLButtonElement>(".submit")!;
    expect(input.disabled).toBe(true);
    expect(button.disabled).toBe(true);
    // a second submit while busy is dropped, not queued
    submitThroughForm(handle, IMPERFECT.text);
    await eventually(() => {
      expect(input.disabled).toBe(false);
    });
    expect(handle.session()!.history).toHaveLength(1);
    expect(handle.session()!.history[0]!.statement).toBe(PERFECT.text);
  });
});
