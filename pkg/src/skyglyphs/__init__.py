"""Balloon-glyph corpus explorer: ingestion, glyph geometry, layout, sessions."""

from .glyphs import (
    AXIS_ORDER,
    GlyphConfig,
    ProductPalette,
    SpikedGlyph,
    axis_radius,
    build_spiked_glyph,
    depth_of,
    glyph_record,
    visual_of,
)
from .ingest import (
    Corpus,
    CorpusStats,
    DeckMetrics,
    DeckRecord,
    ManifestError,
    SlideRecord,
    TermDictionary,
    compute_deck_metrics,
    corpus_stats,
    extract_mentions,
    load_corpus,
    load_manifest,
    tokenize,
)
from .layout import SimConfig, Simulation, SplitMix64, Viewport, run_until_converged
from .session import CommandError, Session, SessionTuning, replay

__version__ = "0.1.0"

__all__ = [
    "AXIS_ORDER",
    "GlyphConfig",
    "ProductPalette",
    "SpikedGlyph",
    "axis_radius",
    "build_spiked_glyph",
    "depth_of",
    "glyph_record",
    "visual_of",
    "Corpus",
    "CorpusStats",
    "DeckMetrics",
    "DeckRecord",
    "ManifestError",
    "SlideRecord",
    "TermDictionary",
    "compute_deck_metrics",
    "corpus_stats",
    "extract_mentions",
    "load_corpus",
    "load_manifest",
    "tokenize",
    "SimConfig",
    "Simulation",
    "SplitMix64",
    "Viewport",
    "run_until_converged",
    "CommandError",
    "Session",
    "SessionTuning",
    "replay",
    "__version__",
]
