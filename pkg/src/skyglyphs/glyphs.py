"""Spiked-glyph polygons and balloon visual attributes.

The glyph is a four-axis star plot with four fixed anchor vertices
interleaved between the data spikes, so the polygon keeps visible area even
when every axis value is zero. Axis values map to radii on a log scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Mapping

from .ingest import CorpusStats, DeckMetrics, DeckRecord, TermDictionary

# Axis layout, as (name, angle°) with angles counter-clockwise, y up.
AXIS_ORDER = ("n_slides", "n_words", "n_buzzwords", "n_keywords")
AXIS_ANGLE_DEG = {"n_words": 0.0, "n_slides": 90.0, "n_keywords": 180.0, "n_buzzwords": 270.0}
ANCHOR_ANGLES_DEG = (45.0, 135.0, 225.0, 315.0)
# Vertex index of each axis spike in the 8-vertex polygon (CCW from angle 0).
SPIKE_VERTEX = {"n_words": 0, "n_slides": 2, "n_keywords": 4, "n_buzzwords": 6}

PALETTE_SIZE = 12
FALLBACK_COLOUR = -1  # "no product" hue

BALLOON_KINDS = ("hot_air_deck", "simple_slide", "overview_dot")


@dataclass(frozen=True)
class GlyphConfig:
    outer_radius: float = 1.0
    anchor_radius: float = 0.25

    def __post_init__(self):
        if not 0.0 < self.anchor_radius < self.outer_radius:
            raise ValueError("anchor_radius must lie strictly between 0 and outer_radius")


DEFAULT_GLYPH_CONFIG = GlyphConfig()


def axis_radius(value: int, axis_max: int, cfg: GlyphConfig = DEFAULT_GLYPH_CONFIG) -> float:
    """Log-scaled radius for one axis value, in [anchor_radius, outer_radius]."""
    if value < 0:
        raise ValueError(f"axis value must be >= 0, got {value}")
    if value > axis_max:
        raise ValueError(f"axis value {value} exceeds axis maximum {axis_max}")
    if axis_max == 0:
        return cfg.anchor_radius
    span = cfg.outer_radius - cfg.anchor_radius
    return cfg.anchor_radius + span * math.log1p(value) / math.log1p(axis_max)


@dataclass(frozen=True)
class SpikedGlyph:
    axis_values: tuple[int, int, int, int]  # in AXIS_ORDER
    axis_radii: tuple[float, float, float, float]  # in AXIS_ORDER
    vertices: tuple[tuple[float, float], ...]  # 8 points, CCW from angle 0


def build_spiked_glyph(
    metrics: DeckMetrics, stats: CorpusStats, cfg: GlyphConfig = DEFAULT_GLYPH_CONFIG
) -> SpikedGlyph:
    """Interleave four data spikes with four anchor vertices, CCW by angle."""
    values = tuple(metrics.axis_value(a) for a in AXIS_ORDER)
    radii = tuple(
        axis_radius(metrics.axis_value(a), stats.axis_max[a], cfg) for a in AXIS_ORDER
    )
    radius_at = {AXIS_ANGLE_DEG[a]: r for a, r in zip(AXIS_ORDER, radii)}
    for angle in ANCHOR_ANGLES_DEG:
        radius_at[angle] = cfg.anchor_radius
    vertices = []
    for angle in sorted(radius_at):
        rad = math.radians(angle)
        r = radius_at[angle]
        vertices.append((r * math.cos(rad), r * math.sin(rad)))
    return SpikedGlyph(values, radii, tuple(vertices))


def depth_of(shared_at: date, stats: CorpusStats) -> float:
    """0 for the newest deck, 1 for the oldest, linear in between."""
    if not stats.date_min <= shared_at <= stats.date_max:
        raise ValueError(f"date {shared_at} outside corpus range")
    span = (stats.date_max - stats.date_min).days
    if span == 0:
        return 0.0
    return (stats.date_max - shared_at).days / span


@dataclass(frozen=True)
class ProductPalette:
    """Deterministic colour assignment: products sorted by name, hues cycled."""

    products: tuple[str, ...]

    @classmethod
    def from_dictionary(cls, product_dict: TermDictionary) -> "ProductPalette":
        return cls(tuple(product_dict.phrase_names()))

    def colour_index(self, product: str | None) -> int:
        if product is None:
            return FALLBACK_COLOUR
        try:
            return self.products.index(product) % PALETTE_SIZE
        except ValueError:
            return FALLBACK_COLOUR


@dataclass(frozen=True)
class BalloonVisual:
    kind: str
    colour_index: int
    depth: float
    scale: float
    opacity: float


# Older decks read as further away: smaller and more faded, never invisible.
SCALE_SLOPE = 0.6
OPACITY_SLOPE = 0.7


def visual_of(
    metrics: DeckMetrics, depth: float, kind: str, palette: ProductPalette
) -> BalloonVisual:
    if not 0.0 <= depth <= 1.0:
        raise ValueError(f"depth must be in [0,1], got {depth}")
    if kind not in BALLOON_KINDS:
        raise ValueError(f"unknown balloon kind {kind!r}")
    return BalloonVisual(
        kind=kind,
        colour_index=palette.colour_index(metrics.dominant_product),
        depth=depth,
        scale=1.0 - SCALE_SLOPE * depth,
        opacity=1.0 - OPACITY_SLOPE * depth,
    )


def glyph_record(
    deck: DeckRecord,
    metrics: DeckMetrics,
    stats: CorpusStats,
    palette: ProductPalette,
    cfg: GlyphConfig = DEFAULT_GLYPH_CONFIG,
) -> dict:
    """JSON-ready glyph export for one deck."""
    glyph = build_spiked_glyph(metrics, stats, cfg)
    depth = depth_of(deck.shared_at, stats)
    visual = visual_of(metrics, depth, "hot_air_deck", palette)
    return {
        "deck_id": deck.deck_id,
        "axis_values": list(glyph.axis_values),
        "vertices": [[x, y] for x, y in glyph.vertices],
        "colour_index": visual.colour_index,
        "depth": depth,
        "scale": visual.scale,
        "opacity": visual.opacity,
    }


def slide_metrics(
    slide_text: str, dictionaries: Mapping[str, TermDictionary]
) -> DeckMetrics:
    """Per-slide metrics for simple balloons; the slide axis is pinned at 1."""
    from .ingest import text_metrics

    return text_metrics(slide_text, dictionaries, n_slides=1)
