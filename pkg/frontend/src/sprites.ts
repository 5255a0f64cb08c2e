import { colourFor } from "./palette.js";
import type { Draw2D, GlyphRecord } from "./types.js";

// Balloon sprites are plain canvas paths: an envelope circle-ish body, the
// spiked glyph polygon across its middle, and a string/basket motif below.

export function drawSpikedPolygon(
  ctx: Draw2D,
  cx: number,
  cy: number,
  vertices: [number, number][],
  radius: number,
  fill: string,
): void {
  ctx.beginPath();
  vertices.forEach(([gx, gy], i) => {
    // glyph space has y up; canvas y grows downward
    const px = cx + gx * radius;
    const py = cy - gy * radius;
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.closePath();
  ctx.fillStyle = fill;
  ctx.fill();
  ctx.stroke();
}

export function drawHotAirBalloon(
  ctx: Draw2D,
  x: number,
  y: number,
  r: number,
  glyph: GlyphRecord,
  opacity: number,
): void {
  ctx.save();
  ctx.globalAlpha = opacity;
  // envelope
  ctx.beginPath();
  ctx.arc(x, y, r, 0, Math.PI * 2);
  ctx.fillStyle = colourFor(glyph.colour_index);
  ctx.fill();
  ctx.strokeStyle = "rgba(40,40,60,0.55)";
  ctx.lineWidth = 1.2;
  ctx.stroke();
  // strings and basket
  const basketW = r * 0.36;
  const basketTop = y + r * 1.28;
  ctx.beginPath();
  ctx.moveTo(x - basketW / 2, basketTop);
  ctx.lineTo(x - r * 0.5, y + r * 0.75);
  ctx.moveTo(x + basketW / 2, basketTop);
  ctx.lineTo(x + r * 0.5, y + r * 0.75);
  ctx.stroke();
  ctx.fillStyle = "rgba(120,84,50,0.9)";
  ctx.fillRect(x - basketW / 2, basketTop, basketW, basketW * 0.62);
  // the data glyph across the envelope
  drawSpikedPolygon(ctx, x, y, glyph.vertices, r * 0.82, "rgba(255,255,255,0.85)");
  ctx.restore();
}

export function drawSimpleBalloon(ctx: Draw2D, x: number, y: number, r: number, opacity: number): void {
  ctx.save();
  ctx.globalAlpha = opacity;
  ctx.beginPath();
  ctx.arc(x, y, r, 0, Math.PI * 2);
  ctx.fillStyle = "rgba(250,230,120,0.95)";
  ctx.fill();
  ctx.stroke();
  ctx.beginPath();
  ctx.moveTo(x, y + r);
  ctx.lineTo(x, y + r * 1.6);
  ctx.stroke();
  ctx.restore();
}

export function drawDot(ctx: Draw2D, x: number, y: number, r: number, colourIndex: number, opacity: number): void {
  ctx.save();
  ctx.globalAlpha = opacity;
  ctx.beginPath();
  ctx.arc(x, y, r, 0, Math.PI * 2);
  ctx.fillStyle = colourFor(colourIndex);
  ctx.fill();
  ctx.restore();
}

export function drawAnchor(ctx: Draw2D, x: number, y: number, type: string, key: string): void {
  ctx.save();
  ctx.beginPath();
  ctx.arc(x, y, 7, 0, Math.PI * 2);
  ctx.fillStyle = type === "shared_by" ? "#d88" : type === "product" ? "#8ad" : "#8c8";
  ctx.fill();
  ctx.strokeStyle = "#333";
  ctx.stroke();
  ctx.font = "10px sans-serif";
  ctx.fillStyle = "#222";
  ctx.fillText(key, x + 9, y + 3);
  ctx.restore();
}
