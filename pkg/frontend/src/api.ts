import type { Command, CommandAck, DeckDetails, Frame, GlyphRecord } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (...a) => fetch(...a),
  ) {}

  async getCorpus(): Promise<GlyphRecord[]> {
    const r = await this.fetchImpl(`${this.baseUrl}/corpus`);
    if (!r.ok) throw new Error(`corpus fetch failed: ${r.status}`);
    return r.json();
  }

  async getDeckDetails(deckId: string): Promise<DeckDetails> {
    const r = await this.fetchImpl(`${this.baseUrl}/decks/${encodeURIComponent(deckId)}`);
    if (!r.ok) throw new Error(`deck ${deckId} fetch failed: ${r.status}`);
    return r.json();
  }

  slideImageUrl(deckId: string, index: number): string {
    return `${this.baseUrl}/decks/${encodeURIComponent(deckId)}/slides/${index}/image`;
  }

  async openSession(seed?: number): Promise<string> {
    const r = await this.fetchImpl(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(seed === undefined ? {} : { seed }),
    });
    if (!r.ok) throw new Error(`session open failed: ${r.status}`);
    const body = await r.json();
    return body.session_id as string;
  }

  async postCommand(sessionId: string, command: Command): Promise<CommandAck> {
    const r = await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}/commands`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(command),
    });
    if (!r.ok) throw new Error(`command post failed: ${r.status}`);
    return r.json();
  }

  /** Consume the NDJSON frame stream until aborted or `limit` frames arrive. */
  async streamFrames(
    sessionId: string,
    onFrame: (frame: Frame) => void,
    opts: { limit?: number; signal?: AbortSignal } = {},
  ): Promise<void> {
    const params = opts.limit ? `?limit=${opts.limit}` : "";
    const r = await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}/frames${params}`, {
      signal: opts.signal,
    });
    if (!r.ok || !r.body) throw new Error(`frame stream failed: ${r.status}`);
    const reader = r.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let nl;
      while ((nl = buffer.indexOf("\n")) >= 0) {
        const line = buffer.slice(0, nl).trim();
        buffer = buffer.slice(nl + 1);
        if (line) onFrame(JSON.parse(line) as Frame);
      }
    }
    const rest = buffer.trim();
    if (rest) onFrame(JSON.parse(rest) as Frame);
  }
}

/** Parse a chunked NDJSON byte sequence into frames (used by tests). */
export function parseNdjsonChunks(chunks: string[]): Frame[] {
  const frames: Frame[] = [];
  let buffer = "";
  for (const chunk of chunks) {
    buffer += chunk;
    let nl;
    while ((nl = buffer.indexOf("\n")) >= 0) {
      const line = buffer.slice(0, nl).trim();
      buffer = buffer.slice(nl + 1);
      if (line) frames.push(JSON.parse(line));
    }
  }
  if (buffer.trim()) frames.push(JSON.parse(buffer));
  return frames;
}
