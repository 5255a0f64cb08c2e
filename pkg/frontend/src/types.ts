// Wire formats shared with the engine server.

export interface FrameNode {
  id: string;
  x: number;
  y: number;
  r: number;
  o: number;
  hidden: boolean;
}

export interface FrameAnchor {
  id: string;
  type: string; // shared_by | product | term | title | bundle
  key: string;
  x: number;
  y: number;
}

export interface FrameViewport {
  cx: number;
  cy: number;
  zoom: number;
  w: number;
  h: number;
}

export interface SessionBlock {
  state_version: number;
  menus_visible: boolean;
  collection: { kind: string; id: string }[];
  collection_filter_on: boolean;
  popped: Record<string, string>;
}

export interface Frame {
  tick: number;
  mode: "detail" | "overview" | "sorted";
  viewport: FrameViewport;
  nodes: FrameNode[];
  anchors: FrameAnchor[];
  session: SessionBlock;
}

export interface GlyphRecord {
  deck_id: string;
  axis_values: number[];
  vertices: [number, number][];
  colour_index: number;
  depth: number;
  scale: number;
  opacity: number;
  title?: string;
}

export interface DeckAxis {
  axis: string;
  value: number;
  vertex: number;
}

export interface TermButton {
  term: string;
  category: string;
  count: number;
}

export interface DeckDetails {
  deck_id: string;
  title: string;
  shared_by: string;
  repository: string;
  shared_at: string;
  slides: { index: number; image: string }[];
  axes: DeckAxis[];
  terms: TermButton[];
  glyph: GlyphRecord;
}

export interface Command {
  type: string;
  args: Record<string, unknown>;
  client_time?: number;
}

export interface CommandAck {
  ok: boolean;
  message: string | null;
  state_version: number;
}

// Minimal 2D surface the renderer draws on; CanvasRenderingContext2D
// satisfies it, and tests substitute a recording fake.
export interface Draw2D {
  save(): void;
  restore(): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillText(text: string, x: number, y: number): void;
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  globalAlpha: number;
  font: string;
}
