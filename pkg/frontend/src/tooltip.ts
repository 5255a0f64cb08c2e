import type { Command, CommandAck, DeckDetails } from "./types.js";

// Slide preview with scrubber, metadata block, broken-down spike values and
// term buttons. Pure state + callbacks; DOM wiring lives in main.ts.

export interface TooltipCallbacks {
  sendCommand(command: Command): Promise<CommandAck>;
  imageUrl(deckId: string, slideIndex: number): string;
  onToast?(message: string): void;
  onSpikeHighlight?(vertex: number | null): void;
}

export class TooltipController {
  slideIndex = 0;

  constructor(
    readonly details: DeckDetails,
    private cb: TooltipCallbacks,
  ) {}

  get slideCount(): number {
    return this.details.slides.length;
  }

  get scrubberEnabled(): boolean {
    return this.slideCount > 1;
  }

  /** 1-based position on the scrubber, e.g. slide 5 of 12 shows index 4. */
  scrubToOrdinal(ordinal: number): string {
    const clamped = Math.min(Math.max(ordinal, 1), this.slideCount);
    this.slideIndex = clamped - 1;
    return this.currentImageUrl();
  }

  scrubToFraction(fraction: number): string {
    const ordinal = 1 + Math.round(fraction * (this.slideCount - 1));
    return this.scrubToOrdinal(ordinal);
  }

  currentImageUrl(): string {
    return this.cb.imageUrl(this.details.deck_id, this.slideIndex);
  }

  /** Spike <-> value linking: hovering a value highlights its polygon vertex. */
  vertexForAxis(axis: string): number | null {
    const row = this.details.axes.find((a) => a.axis === axis);
    return row ? row.vertex : null;
  }

  axisForVertex(vertex: number): string | null {
    const row = this.details.axes.find((a) => a.vertex === vertex);
    return row ? row.axis : null;
  }

  hoverAxisValue(axis: string | null): void {
    this.cb.onSpikeHighlight?.(axis === null ? null : this.vertexForAxis(axis));
  }

  termButtons(): { term: string; category: string; count: number }[] {
    return this.details.terms;
  }

  async clickTerm(term: string): Promise<boolean> {
    const ack = await this.cb.sendCommand({ type: "find_similar", args: { term } });
    if (!ack.ok) {
      this.cb.onToast?.(ack.message ?? `no other decks mention "${term}"`);
      return false;
    }
    return true;
  }

  async addToCollection(): Promise<boolean> {
    const ack = await this.cb.sendCommand({
      type: "add_to_collection",
      args: { kind: "deck", id: this.details.deck_id },
    });
    if (!ack.ok) this.cb.onToast?.(ack.message ?? "could not collect");
    return ack.ok;
  }
}
