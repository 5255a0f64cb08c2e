import { ApiClient } from "./api.js";
import { GestureTranslator, type Hit } from "./gestures.js";
import { Renderer, chromeLayout, screenToWorld, worldToScreen } from "./renderer.js";
import { TooltipController } from "./tooltip.js";
import type { Command, Draw2D, Frame, GlyphRecord } from "./types.js";

// Browser entry point. Everything here is wiring: the engine owns layout and
// interaction semantics, the renderer draws the latest frame, gestures map
// pointer input to commands.

const canvas = document.getElementById("sky") as HTMLCanvasElement;
const tooltipEl = document.getElementById("tooltip") as HTMLDivElement;
const dockEl = document.getElementById("dock") as HTMLDivElement;
const panelEl = document.getElementById("collections") as HTMLDivElement;
const toastEl = document.getElementById("toast") as HTMLDivElement;

const api = new ApiClient("");
let sessionId = "";
let latestFrame: Frame | null = null;
const glyphs = new Map<string, GlyphRecord>();
let tooltip: TooltipController | null = null;

function send(command: Command): void {
  void api.postCommand(sessionId, command);
}

async function sendAcked(command: Command) {
  return api.postCommand(sessionId, command);
}

function toast(message: string): void {
  toastEl.textContent = message;
  toastEl.style.opacity = "1";
  setTimeout(() => (toastEl.style.opacity = "0"), 2400);
}

function hitTest(sx: number, sy: number): Hit {
  const frame = latestFrame;
  if (!frame) return { kind: "background" };
  const panel = panelEl.getBoundingClientRect();
  if (sx >= panel.left && sx <= panel.right && sy >= panel.top && sy <= panel.bottom) {
    return { kind: "collection-panel" };
  }
  for (let i = frame.nodes.length - 1; i >= 0; i--) {
    const n = frame.nodes[i];
    if (n.hidden) continue;
    const [nx, ny] = worldToScreen(frame, canvas.width, canvas.height, n.x, n.y);
    if (Math.hypot(sx - nx, sy - ny) <= n.r * frame.viewport.zoom) {
      return n.id.includes("/s") ? { kind: "slide", id: n.id } : { kind: "deck", id: n.id };
    }
  }
  for (const a of frame.anchors) {
    if (a.type === "bundle") continue;
    const [ax, ay] = worldToScreen(frame, canvas.width, canvas.height, a.x, a.y);
    if (Math.hypot(sx - ax, sy - ay) <= 10) return { kind: "anchor", id: a.id };
  }
  return { kind: "background" };
}

const gestures = new GestureTranslator({
  hitTest,
  toWorld: (sx, sy) =>
    latestFrame ? screenToWorld(latestFrame, canvas.width, canvas.height, sx, sy) : [sx, sy],
  zoom: () => latestFrame?.viewport.zoom ?? 1,
  send,
});

async function openTooltip(deckId: string): Promise<void> {
  const details = await api.getDeckDetails(deckId);
  tooltip = new TooltipController(details, {
    sendCommand: sendAcked,
    imageUrl: (d, i) => api.slideImageUrl(d, i),
    onToast: toast,
  });
  tooltipEl.innerHTML = "";
  tooltipEl.style.display = "block";
  const title = document.createElement("h3");
  title.textContent = details.title;
  const meta = document.createElement("p");
  meta.textContent = `${details.shared_by} · ${details.repository} · ${details.shared_at}`;
  const img = document.createElement("img");
  img.src = tooltip.currentImageUrl();
  img.onerror = () => {
    img.alt = "no preview";
  };
  const scrubber = document.createElement("input");
  scrubber.type = "range";
  scrubber.min = "1";
  scrubber.max = String(tooltip.slideCount);
  scrubber.value = "1";
  scrubber.disabled = !tooltip.scrubberEnabled;
  scrubber.oninput = () => {
    img.src = tooltip!.scrubToOrdinal(Number(scrubber.value));
  };
  const axes = document.createElement("ul");
  for (const a of details.axes) {
    const li = document.createElement("li");
    li.textContent = `${a.axis.replace("n_", "")}: ${a.value}`;
    li.onmouseenter = () => tooltip!.hoverAxisValue(a.axis);
    li.onmouseleave = () => tooltip!.hoverAxisValue(null);
    axes.appendChild(li);
  }
  const terms = document.createElement("div");
  for (const t of tooltip.termButtons()) {
    const btn = document.createElement("button");
    btn.textContent = `${t.term} (${t.count})`;
    btn.title = t.category;
    btn.onclick = () => void tooltip!.clickTerm(t.term);
    terms.appendChild(btn);
  }
  const collect = document.createElement("button");
  collect.textContent = "+ add to collection";
  collect.onclick = () => void tooltip!.addToCollection();
  const close = document.createElement("button");
  close.textContent = "×";
  close.onclick = () => {
    tooltipEl.style.display = "none";
    tooltip = null;
  };
  tooltipEl.append(close, title, meta, img, scrubber, axes, terms, collect);
}

function buildDock(): void {
  dockEl.innerHTML = "";
  const addButton = (label: string, onClick: () => void) => {
    const b = document.createElement("button");
    b.textContent = label;
    b.onclick = () => {
      send({ type: "activity", args: {} });
      onClick();
    };
    dockEl.appendChild(b);
  };
  addButton("sort slides ▼", () => send({ type: "sort", args: { attribute: "n_slides", order: "desc" } }));
  addButton("sort date ▲", () => send({ type: "sort", args: { attribute: "shared_at", order: "asc" } }));
  addButton("clear sort", () => send({ type: "clear_sort", args: {} }));
  addButton("overview", () => send({ type: "enter_overview", args: {} }));
  addButton("detail", () => send({ type: "leave_overview", args: {} }));
  addButton("filter collection", () => send({ type: "toggle_collection_filter", args: {} }));
  addButton("clear collection", () => send({ type: "clear_collection", args: {} }));
  const search = document.createElement("input");
  search.placeholder = "search titles…";
  search.onkeydown = (e) => {
    if (e.key === "Enter" && search.value.trim()) {
      send({ type: "search_title", args: { text: search.value.trim() } });
    }
  };
  dockEl.appendChild(search);
}

function renderCollections(frame: Frame): void {
  panelEl.innerHTML = "<h4>collection</h4>";
  for (const item of frame.session.collection) {
    const row = document.createElement("div");
    row.textContent = `${item.kind}: ${item.id}`;
    const rm = document.createElement("button");
    rm.textContent = "−";
    rm.onclick = () => send({ type: "remove_from_collection", args: { kind: item.kind, id: item.id } });
    row.appendChild(rm);
    panelEl.appendChild(row);
  }
}

async function run(): Promise<void> {
  const records = await api.getCorpus();
  for (const g of records) glyphs.set(g.deck_id, g);
  sessionId = await api.openSession();
  buildDock();

  const ctx = canvas.getContext("2d") as unknown as Draw2D;
  const renderer = new Renderer(ctx, canvas.width, canvas.height);

  canvas.addEventListener("pointerdown", (e) => gestures.pointerDown(e.offsetX, e.offsetY));
  canvas.addEventListener("pointermove", (e) => gestures.pointerMove(e.offsetX, e.offsetY));
  canvas.addEventListener("pointerup", (e) => {
    const hit = hitTest(e.offsetX, e.offsetY);
    gestures.pointerUp(e.offsetX, e.offsetY);
    if (hit.kind === "deck" && latestFrame && !latestFrame.session.popped[hit.id]) {
      void openTooltip(hit.id);
    }
  });
  canvas.addEventListener("wheel", (e) => gestures.wheelZoom(e.deltaY > 0));
  window.addEventListener("resize", () => {
    canvas.width = window.innerWidth;
    canvas.height = window.innerHeight;
    renderer.resize(canvas.width, canvas.height);
  });

  void api.streamFrames(sessionId, (frame) => {
    latestFrame = frame;
  });

  const loop = () => {
    if (latestFrame) {
      renderer.render(latestFrame, glyphs);
      dockEl.style.display = latestFrame.session.menus_visible ? "flex" : "none";
      renderCollections(latestFrame);
    }
    requestAnimationFrame(loop);
  };
  loop();
}

void run();
