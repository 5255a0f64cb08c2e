import type { Command } from "./types.js";

// Translates pointer activity into engine commands. The engine owns all
// interaction semantics (press timing, cluster membership, filtering); this
// layer only decides which command a gesture means.

export type Hit =
  | { kind: "background" }
  | { kind: "deck"; id: string }
  | { kind: "slide"; id: string }
  | { kind: "anchor"; id: string }
  | { kind: "collection-panel" }
  | { kind: "pin-affordance"; id: string };

export interface GestureDeps {
  hitTest(sx: number, sy: number): Hit;
  toWorld(sx: number, sy: number): [number, number];
  zoom(): number;
  send(command: Command): void;
}

const DRAG_SLOP_PX = 5;

interface PointerState {
  startX: number;
  startY: number;
  lastX: number;
  lastY: number;
  hit: Hit;
  moved: boolean;
  pressing: boolean; // press_start sent, press_end still owed
  draggingNode: string | null;
}

export class GestureTranslator {
  private state: PointerState | null = null;

  constructor(private deps: GestureDeps) {}

  pointerDown(sx: number, sy: number): void {
    this.deps.send({ type: "activity", args: {} });
    const hit = this.deps.hitTest(sx, sy);
    this.state = {
      startX: sx,
      startY: sy,
      lastX: sx,
      lastY: sy,
      hit,
      moved: false,
      pressing: false,
      draggingNode: null,
    };
    if (hit.kind === "deck") {
      this.deps.send({ type: "press_start", args: { deck_id: hit.id } });
      this.state.pressing = true;
    }
  }

  pointerMove(sx: number, sy: number): void {
    const s = this.state;
    if (!s) return;
    const dx = sx - s.lastX;
    const dy = sy - s.lastY;
    if (!s.moved) {
      const fromStart = Math.hypot(sx - s.startX, sy - s.startY);
      if (fromStart < DRAG_SLOP_PX) {
        return;
      }
      s.moved = true;
      if (s.pressing && s.hit.kind === "deck") {
        // movement turns the hold into a drag; an early release reverts
        this.deps.send({ type: "press_end", args: { deck_id: s.hit.id } });
        s.pressing = false;
      }
      if (s.hit.kind === "deck" || s.hit.kind === "slide") {
        s.draggingNode = s.hit.id;
      }
    }
    if (s.draggingNode) {
      const [wx, wy] = this.deps.toWorld(sx, sy);
      this.deps.send({ type: "drag", args: { node_id: s.draggingNode, x: wx, y: wy } });
    } else if (s.hit.kind === "background") {
      // content follows the pointer: the viewport centre moves opposite
      const zoom = this.deps.zoom();
      this.deps.send({ type: "pan", args: { dx: -dx / zoom, dy: -dy / zoom } });
    }
    s.lastX = sx;
    s.lastY = sy;
  }

  pointerUp(sx: number, sy: number): void {
    const s = this.state;
    this.state = null;
    if (!s) return;
    if (s.pressing && s.hit.kind === "deck") {
      this.deps.send({ type: "press_end", args: { deck_id: s.hit.id } });
      return;
    }
    if (s.draggingNode) {
      const drop = this.deps.hitTest(sx, sy);
      if (drop.kind === "collection-panel") {
        const kind = s.hit.kind === "slide" ? "slide" : "deck";
        this.deps.send({ type: "add_to_collection", args: { kind, id: s.draggingNode } });
      } else if (drop.kind === "pin-affordance") {
        this.deps.send({ type: "pin", args: { node_id: s.draggingNode } });
      }
    }
  }

  /** Anchor icons can be dragged into the collections panel too. */
  anchorDropOnPanel(clusterId: string): void {
    this.deps.send({ type: "activity", args: {} });
    this.deps.send({ type: "add_to_collection", args: { kind: "cluster", id: clusterId } });
  }

  termButtonClick(term: string): void {
    this.deps.send({ type: "activity", args: {} });
    this.deps.send({ type: "find_similar", args: { term } });
  }

  wheelZoom(toOverview: boolean): void {
    this.deps.send({ type: "activity", args: {} });
    this.deps.send({ type: toOverview ? "enter_overview" : "leave_overview", args: {} });
  }
}
