import { drawAnchor, drawDot, drawHotAirBalloon, drawSimpleBalloon } from "./sprites.js";
import type { Draw2D, Frame, FrameNode, GlyphRecord } from "./types.js";

export interface Chrome {
  minimap: { x: number; y: number; w: number; h: number };
  exploreButton: { x: number; y: number; w: number; h: number };
}

export function worldToScreen(
  frame: Frame,
  width: number,
  height: number,
  wx: number,
  wy: number,
): [number, number] {
  const { cx, cy, zoom } = frame.viewport;
  return [(wx - cx) * zoom + width / 2, (wy - cy) * zoom + height / 2];
}

export function screenToWorld(
  frame: Frame,
  width: number,
  height: number,
  sx: number,
  sy: number,
): [number, number] {
  const { cx, cy, zoom } = frame.viewport;
  return [(sx - width / 2) / zoom + cx, (sy - height / 2) / zoom + cy];
}

/** Back-to-front draw order: faded (older, deeper) balloons first. */
export function depthOrder(nodes: FrameNode[]): FrameNode[] {
  return nodes
    .filter((n) => !n.hidden)
    .slice()
    .sort((a, b) => a.o - b.o || (a.id < b.id ? -1 : a.id > b.id ? 1 : 0));
}

export function chromeLayout(width: number, height: number): Chrome {
  const mmW = Math.min(200, width * 0.22);
  const mmH = mmW * 0.75;
  return {
    // minimap docks in the top right corner
    minimap: { x: width - mmW - 12, y: 12, w: mmW, h: mmH },
    // explore button sits bottom centre
    exploreButton: { x: width / 2 - 60, y: height - 48, w: 120, h: 36 },
  };
}

export class Renderer {
  constructor(
    private ctx: Draw2D,
    private width: number,
    private height: number,
  ) {}

  resize(width: number, height: number): void {
    this.width = width;
    this.height = height;
  }

  render(frame: Frame, glyphs: Map<string, GlyphRecord>): void {
    const ctx = this.ctx;
    ctx.clearRect(0, 0, this.width, this.height);
    ctx.save();
    ctx.fillStyle = "#dff0fa"; // sky
    ctx.fillRect(0, 0, this.width, this.height);
    ctx.restore();

    const zoom = frame.viewport.zoom;
    for (const node of depthOrder(frame.nodes)) {
      const [sx, sy] = worldToScreen(frame, this.width, this.height, node.x, node.y);
      const sr = node.r * zoom;
      const glyph = glyphs.get(node.id);
      if (frame.mode === "overview") {
        drawDot(ctx, sx, sy, Math.max(2, sr * 0.18), glyph ? glyph.colour_index : -1, node.o);
      } else if (glyph) {
        drawHotAirBalloon(ctx, sx, sy, sr, glyph, node.o);
      } else {
        drawSimpleBalloon(ctx, sx, sy, sr, node.o); // slide balloons have no deck glyph
      }
    }
    for (const anchor of frame.anchors) {
      if (anchor.type === "bundle") continue;
      const [sx, sy] = worldToScreen(frame, this.width, this.height, anchor.x, anchor.y);
      drawAnchor(ctx, sx, sy, anchor.type, anchor.key);
    }
    this.drawChrome(frame);
  }

  private drawChrome(frame: Frame): void {
    const ctx = this.ctx;
    const chrome = chromeLayout(this.width, this.height);
    const mm = chrome.minimap;
    ctx.save();
    ctx.globalAlpha = 0.9;
    ctx.fillStyle = "rgba(255,255,255,0.85)";
    ctx.fillRect(mm.x, mm.y, mm.w, mm.h);
    ctx.strokeStyle = "#667";
    ctx.strokeRect(mm.x, mm.y, mm.w, mm.h);
    const visible = frame.nodes.filter((n) => !n.hidden);
    if (visible.length > 0) {
      const vp = frame.viewport;
      const rectW = vp.w / vp.zoom;
      const rectH = vp.h / vp.zoom;
      let x0 = vp.cx - rectW / 2;
      let y0 = vp.cy - rectH / 2;
      let x1 = vp.cx + rectW / 2;
      let y1 = vp.cy + rectH / 2;
      for (const n of visible) {
        x0 = Math.min(x0, n.x);
        y0 = Math.min(y0, n.y);
        x1 = Math.max(x1, n.x);
        y1 = Math.max(y1, n.y);
      }
      const scale = Math.min(mm.w / (x1 - x0 || 1), mm.h / (y1 - y0 || 1));
      for (const n of visible) {
        const glyphless = (n.x - x0) * scale;
        drawDot(ctx, mm.x + glyphless, mm.y + (n.y - y0) * scale, 1.5, -1, 1);
      }
      // box marking the current view
      ctx.strokeStyle = "#d33";
      ctx.strokeRect(
        mm.x + (vp.cx - rectW / 2 - x0) * scale,
        mm.y + (vp.cy - rectH / 2 - y0) * scale,
        rectW * scale,
        rectH * scale,
      );
    }
    ctx.restore();

    if (frame.session.menus_visible) {
      const b = chrome.exploreButton;
      ctx.save();
      ctx.fillStyle = "rgba(255,255,255,0.92)";
      ctx.fillRect(b.x, b.y, b.w, b.h);
      ctx.strokeRect(b.x, b.y, b.w, b.h);
      ctx.fillStyle = "#223";
      ctx.font = "14px sans-serif";
      ctx.fillText("explore", b.x + 34, b.y + 23);
      ctx.restore();
    }
  }
}
