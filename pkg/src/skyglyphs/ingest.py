"""Deck repository loading and per-deck metric extraction.

A corpus arrives as a JSON manifest (either a JSON array or one JSON object
per line) plus plain-text term dictionaries (one phrase per line) for three
categories: products, keywords, buzzwords. Each deck is reduced to a
``DeckMetrics``: slide and word totals plus per-phrase mention counts.

Matching is dictionary-driven. Text is lowercased and split into runs of
alphanumeric characters; dictionary phrases claim non-overlapping token
windows, longest phrases first, then left to right within a length. A token
claimed by one match cannot contribute to another.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping, Sequence

TOKEN_RE = re.compile(r"[a-z0-9]+")

CATEGORIES = ("product", "keyword", "buzzword")
AXES = ("n_slides", "n_words", "n_keywords", "n_buzzwords")

MAX_PHRASE_TOKENS = 5


class ManifestError(ValueError):
    """Manifest file missing, unreadable, or structurally invalid."""


class DictionaryError(ValueError):
    """Term dictionary contains an unusable phrase."""


def tokenize(text: str) -> list[str]:
    """Lowercase alphanumeric token runs; everything else separates."""
    return TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class SlideRecord:
    slide_index: int
    image_ref: str
    text: str


@dataclass(frozen=True)
class DeckRecord:
    deck_id: str
    title: str
    shared_by: str
    repository: str
    shared_at: date
    slides: tuple[SlideRecord, ...]


@dataclass(frozen=True)
class TermDictionary:
    """A category of search phrases, stored as normalized token tuples."""

    category: str
    phrases: frozenset[tuple[str, ...]]

    @classmethod
    def from_phrases(cls, category: str, phrases: Iterable[str]) -> "TermDictionary":
        if category not in CATEGORIES:
            raise DictionaryError(f"unknown category {category!r}")
        normalized = set()
        for raw in phrases:
            tokens = tuple(tokenize(raw))
            if not tokens:
                raise DictionaryError(f"{category}: empty phrase {raw!r}")
            if len(tokens) > MAX_PHRASE_TOKENS:
                raise DictionaryError(
                    f"{category}: phrase {raw!r} exceeds {MAX_PHRASE_TOKENS} tokens"
                )
            normalized.add(tokens)
        return cls(category, frozenset(normalized))

    @classmethod
    def load(cls, category: str, path: str | Path) -> "TermDictionary":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls.from_phrases(category, (ln for ln in lines if ln.strip()))

    def phrase_names(self) -> list[str]:
        return sorted(" ".join(p) for p in self.phrases)


def empty_dictionaries() -> dict[str, TermDictionary]:
    return {c: TermDictionary(c, frozenset()) for c in CATEGORIES}


def extract_mentions(text: str, dictionary: TermDictionary) -> dict[str, int]:
    """Count non-overlapping phrase occurrences in ``text``.

    Longer phrases win over shorter ones anywhere in the text; within one
    phrase length, windows are claimed left to right.
    """
    return _extract_from_tokens(tokenize(text), dictionary)


def _extract_from_tokens(tokens: list[str], dictionary: TermDictionary) -> dict[str, int]:
    if not tokens or not dictionary.phrases:
        return {}
    by_len: dict[int, set[tuple[str, ...]]] = {}
    for phrase in dictionary.phrases:
        by_len.setdefault(len(phrase), set()).add(phrase)

    n = len(tokens)
    consumed = bytearray(n)
    counts: dict[str, int] = {}
    for length in sorted(by_len, reverse=True):
        table = by_len[length]
        if length == 1:
            singles = {p[0] for p in table}
            for i, tok in enumerate(tokens):
                if not consumed[i] and tok in singles:
                    consumed[i] = 1
                    counts[tok] = counts.get(tok, 0) + 1
            continue
        # index by first token so most windows are rejected in O(1)
        firsts: dict[str, bool] = {p[0]: True for p in table}
        for start in range(n - length + 1):
            if tokens[start] not in firsts:
                continue
            if any(consumed[start : start + length]):
                continue
            window = tuple(tokens[start : start + length])
            if window in table:
                for k in range(start, start + length):
                    consumed[k] = 1
                name = " ".join(window)
                counts[name] = counts.get(name, 0) + 1
    return dict(sorted(counts.items()))


@dataclass(frozen=True)
class DeckMetrics:
    n_slides: int
    n_words: int
    n_keywords: int
    n_buzzwords: int
    product_mentions: Mapping[str, int]
    keyword_mentions: Mapping[str, int]
    buzzword_mentions: Mapping[str, int]
    dominant_product: str | None

    def axis_value(self, axis: str) -> int:
        if axis not in AXES:
            raise ValueError(f"unknown axis {axis!r}")
        return getattr(self, axis)


def compute_deck_metrics(
    deck: DeckRecord, dictionaries: Mapping[str, TermDictionary]
) -> DeckMetrics:
    """Reduce one deck to its four axis values and mention maps.

    Term extraction runs over the concatenation of all slide texts, so a
    phrase may span slides of the same deck but never two decks.
    """
    text = "\n".join(s.text for s in deck.slides)
    return text_metrics(text, dictionaries, n_slides=len(deck.slides))


def text_metrics(
    text: str, dictionaries: Mapping[str, TermDictionary], n_slides: int = 1
) -> DeckMetrics:
    """Metrics over a bare text body; used for decks and single slides alike."""
    tokens = tokenize(text)
    mentions: dict[str, dict[str, int]] = {}
    for c in CATEGORIES:
        d = dictionaries.get(c)
        mentions[c] = _extract_from_tokens(tokens, d) if d is not None else {}
    products = mentions["product"]
    dominant = None
    if products:
        dominant = sorted(products.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]
    return DeckMetrics(
        n_slides=n_slides,
        n_words=len(tokens),
        n_keywords=sum(mentions["keyword"].values()),
        n_buzzwords=sum(mentions["buzzword"].values()),
        product_mentions=products,
        keyword_mentions=mentions["keyword"],
        buzzword_mentions=mentions["buzzword"],
        dominant_product=dominant,
    )


@dataclass(frozen=True)
class CorpusStats:
    axis_max: Mapping[str, int]
    date_min: date
    date_max: date
    n_decks: int
    n_slides_total: int


def corpus_stats(metrics: Sequence[DeckMetrics], dates: Sequence[date]) -> CorpusStats:
    if not metrics:
        raise ValueError("corpus_stats requires at least one deck")
    if len(metrics) != len(dates):
        raise ValueError("metrics and dates length mismatch")
    axis_max = {axis: max(m.axis_value(axis) for m in metrics) for axis in AXES}
    return CorpusStats(
        axis_max=axis_max,
        date_min=min(dates),
        date_max=max(dates),
        n_decks=len(metrics),
        n_slides_total=sum(m.n_slides for m in metrics),
    )


def load_manifest(path: str | Path) -> list[DeckRecord]:
    """Parse a manifest file into validated ``DeckRecord``s, in file order."""
    p = Path(path)
    if not p.exists():
        raise ManifestError(f"manifest not found: {p}")
    raw = p.read_text(encoding="utf-8")
    entries = _manifest_entries(raw)
    decks: list[DeckRecord] = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        deck = _parse_deck(entry, i)
        if deck.deck_id in seen:
            raise ManifestError(f"record {i}: duplicate deck_id {deck.deck_id!r}")
        seen.add(deck.deck_id)
        decks.append(deck)
    return decks


def _manifest_entries(raw: str) -> list:
    stripped = raw.lstrip()
    if not stripped:
        return []
    if stripped.startswith("["):
        try:
            entries = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
        if not isinstance(entries, list):
            raise ManifestError("array manifest must be a JSON list")
        return entries
    entries = []
    for lineno, line in enumerate(raw.splitlines()):
        if not line.strip():
            continue
        try:
            entries.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ManifestError(f"record {len(entries)} (line {lineno + 1}): {exc}") from exc
    return entries


def _parse_deck(entry: object, index: int) -> DeckRecord:
    def fail(msg: str) -> ManifestError:
        return ManifestError(f"record {index}: {msg}")

    if not isinstance(entry, dict):
        raise fail("not a JSON object")
    for key in ("id", "title", "shared_by", "repository", "shared_at", "slides"):
        if key not in entry:
            raise fail(f"missing field {key!r}")
    deck_id = entry["id"]
    if not isinstance(deck_id, str) or not deck_id:
        raise fail("id must be a non-empty string")
    for key in ("title", "shared_by", "repository"):
        if not isinstance(entry[key], str):
            raise fail(f"{key} must be a string")
    try:
        shared_at = date.fromisoformat(entry["shared_at"])
    except (TypeError, ValueError):
        raise fail(f"shared_at is not an ISO-8601 date: {entry['shared_at']!r}") from None
    slides_raw = entry["slides"]
    if not isinstance(slides_raw, list) or not slides_raw:
        raise fail("slides must be a non-empty list")
    slides = []
    for pos, s in enumerate(slides_raw):
        if not isinstance(s, dict):
            raise fail(f"slide {pos} is not an object")
        if s.get("index") != pos:
            raise fail(f"slide {pos} has index {s.get('index')!r}; indices must run 0..n-1")
        image = s.get("image")
        text = s.get("text", "")
        if not isinstance(image, str):
            raise fail(f"slide {pos}: image must be a string")
        if not isinstance(text, str):
            raise fail(f"slide {pos}: text must be a string")
        slides.append(SlideRecord(slide_index=pos, image_ref=image, text=text))
    return DeckRecord(
        deck_id=deck_id,
        title=entry["title"],
        shared_by=entry["shared_by"],
        repository=entry["repository"],
        shared_at=shared_at,
        slides=tuple(slides),
    )


@dataclass(frozen=True)
class Corpus:
    """Everything downstream code needs: records, metrics, and stats."""

    decks: tuple[DeckRecord, ...]
    metrics: Mapping[str, DeckMetrics]
    stats: CorpusStats
    dictionaries: Mapping[str, TermDictionary]

    @classmethod
    def build(
        cls, decks: Sequence[DeckRecord], dictionaries: Mapping[str, TermDictionary]
    ) -> "Corpus":
        metrics = {d.deck_id: compute_deck_metrics(d, dictionaries) for d in decks}
        if decks:
            stats = corpus_stats(
                [metrics[d.deck_id] for d in decks], [d.shared_at for d in decks]
            )
        else:
            # a server can hold zero decks; corpus_stats itself stays strict
            epoch = date(1970, 1, 1)
            stats = CorpusStats({a: 0 for a in AXES}, epoch, epoch, 0, 0)
        return cls(tuple(decks), metrics, stats, dict(dictionaries))

    def deck(self, deck_id: str) -> DeckRecord:
        for d in self.decks:
            if d.deck_id == deck_id:
                return d
        raise KeyError(deck_id)


def load_corpus(
    manifest_path: str | Path,
    products_path: str | Path | None = None,
    keywords_path: str | Path | None = None,
    buzzwords_path: str | Path | None = None,
) -> Corpus:
    decks = load_manifest(manifest_path)
    dicts = empty_dictionaries()
    for category, path in (
        ("product", products_path),
        ("keyword", keywords_path),
        ("buzzword", buzzwords_path),
    ):
        if path is not None:
            dicts[category] = TermDictionary.load(category, path)
    return Corpus.build(decks, dicts)
