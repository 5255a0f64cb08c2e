import { describe, expect, it } from "vitest";
import { GestureTranslator, type Hit } from "../src/gestures.js";
import type { Command } from "../src/types.js";

function harness(hits: Record<string, Hit> = {}, zoom = 2) {
  const sent: Command[] = [];
  const translator = new GestureTranslator({
    hitTest: (x, y) => hits[`${x},${y}`] ?? { kind: "background" },
    toWorld: (x, y) => [x * 10, y * 10],
    zoom: () => zoom,
    send: (c) => sent.push(c),
  });
  return { translator, sent };
}

function types(sent: Command[]): string[] {
  return sent.map((c) => c.type);
}

describe("gesture translation", () => {
  it("emits activity on any pointer down", () => {
    const { translator, sent } = harness();
    translator.pointerDown(10, 10);
    expect(sent[0].type).toBe("activity");
  });

  it("background drag pans opposite the pointer, scaled by zoom", () => {
    const { translator, sent } = harness({}, 2);
    translator.pointerDown(100, 100);
    translator.pointerMove(112, 100); // past slop
    translator.pointerUp(112, 100);
    const pans = sent.filter((c) => c.type === "pan");
    expect(pans).toHaveLength(1);
    expect(pans[0].args.dx).toBeCloseTo(-12 / 2, 12);
    expect(pans[0].args.dy).toBeCloseTo(0, 12);
  });

  it("press and release without movement maps to press_start then press_end", () => {
    const { translator, sent } = harness({ "50,50": { kind: "deck", id: "d7" } });
    translator.pointerDown(50, 50);
    translator.pointerUp(50, 50);
    expect(types(sent)).toEqual(["activity", "press_start", "press_end"]);
    expect(sent[1].args).toEqual({ deck_id: "d7" });
    expect(sent[2].args).toEqual({ deck_id: "d7" });
  });

  it("moving past the slop turns a hold into a drag and cancels the press", () => {
    const { translator, sent } = harness({ "50,50": { kind: "deck", id: "d7" } });
    translator.pointerDown(50, 50);
    translator.pointerMove(58, 50);
    translator.pointerMove(60, 52);
    translator.pointerUp(60, 52);
    const t = types(sent);
    expect(t[0]).toBe("activity");
    expect(t[1]).toBe("press_start");
    expect(t[2]).toBe("press_end"); // cancelled before the drag starts
    const drags = sent.filter((c) => c.type === "drag");
    expect(drags.length).toBeGreaterThanOrEqual(2);
    expect(drags[0].args).toEqual({ node_id: "d7", x: 580, y: 500 });
    expect(drags.at(-1)!.args).toEqual({ node_id: "d7", x: 600, y: 520 });
  });

  it("tiny jitter below the slop stays a press", () => {
    const { translator, sent } = harness({ "50,50": { kind: "deck", id: "d7" } });
    translator.pointerDown(50, 50);
    translator.pointerMove(52, 51);
    translator.pointerUp(52, 51);
    expect(types(sent)).toEqual(["activity", "press_start", "press_end"]);
  });

  it("dropping a dragged balloon on the collections panel collects it", () => {
    const { translator, sent } = harness({
      "50,50": { kind: "deck", id: "d7" },
      "300,200": { kind: "collection-panel" },
    });
    translator.pointerDown(50, 50);
    translator.pointerMove(150, 120);
    translator.pointerUp(300, 200);
    const adds = sent.filter((c) => c.type === "add_to_collection");
    expect(adds).toHaveLength(1);
    expect(adds[0].args).toEqual({ kind: "deck", id: "d7" });
  });

  it("dropping on the pin affordance pins the node", () => {
    const { translator, sent } = harness({
      "50,50": { kind: "slide", id: "d7/s2" },
      "70,70": { kind: "pin-affordance", id: "d7/s2" },
    });
    translator.pointerDown(50, 50);
    translator.pointerMove(65, 66);
    translator.pointerUp(70, 70);
    expect(sent.at(-1)).toEqual({ type: "pin", args: { node_id: "d7/s2" } });
  });

  it("term buttons map to find_similar", () => {
    const { translator, sent } = harness();
    translator.termButtonClick("cloud");
    expect(types(sent)).toEqual(["activity", "find_similar"]);
    expect(sent[1].args).toEqual({ term: "cloud" });
  });

  it("anchor drop on panel collects the cluster", () => {
    const { translator, sent } = harness();
    translator.anchorDropOnPanel("product:beamer");
    expect(sent.at(-1)).toEqual({
      type: "add_to_collection",
      args: { kind: "cluster", id: "product:beamer" },
    });
  });

  it("wheel gestures toggle the overview", () => {
    const { translator, sent } = harness();
    translator.wheelZoom(true);
    translator.wheelZoom(false);
    expect(types(sent)).toEqual(["activity", "enter_overview", "activity", "leave_overview"]);
  });
});
