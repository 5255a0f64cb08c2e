import json
import random
from datetime import date, timedelta

import pytest


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\n[ACCEPTANCE] {name}: {'PASS' if report.passed else 'FAIL'}")

from skyglyphs.ingest import (
    Corpus,
    DeckRecord,
    SlideRecord,
    TermDictionary,
    empty_dictionaries,
)


def make_deck(deck_id, texts, shared_by="ana", repository="repo", shared_at=date(2020, 6, 1), title=None):
    slides = tuple(SlideRecord(i, f"{deck_id}/{i}.png", t) for i, t in enumerate(texts))
    return DeckRecord(
        deck_id=deck_id,
        title=title if title is not None else f"Deck {deck_id}",
        shared_by=shared_by,
        repository=repository,
        shared_at=shared_at,
        slides=slides,
    )


def make_dicts(products=(), keywords=(), buzzwords=()):
    return {
        "product": TermDictionary.from_phrases("product", products),
        "keyword": TermDictionary.from_phrases("keyword", keywords),
        "buzzword": TermDictionary.from_phrases("buzzword", buzzwords),
    }


def write_manifest(path, decks):
    entries = [
        {
            "id": d.deck_id,
            "title": d.title,
            "shared_by": d.shared_by,
            "repository": d.repository,
            "shared_at": d.shared_at.isoformat(),
            "slides": [
                {"index": s.slide_index, "image": s.image_ref, "text": s.text}
                for s in d.slides
            ],
        }
        for d in decks
    ]
    path.write_text(json.dumps(entries), encoding="utf-8")
    return path


PRODUCTS = ("alpha cad", "beamer", "claytool")
KEYWORDS = ("cloud", "bim", "render farm")
BUZZWORDS = ("synergy", "paradigm shift")

VOCAB = (
    "design review roadmap target launch model detail budget team plan "
    "update sketch field pilot factory print layout tool future vision"
).split()


def random_corpus(seed, n_decks=24, sharers=("ana", "bo", "kim"), max_slides=8):
    """Small random corpus with real term mentions; deterministic per seed."""
    rng = random.Random(seed)
    phrases = list(PRODUCTS + KEYWORDS + BUZZWORDS)
    decks = []
    for i in range(n_decks):
        n_slides = rng.randint(1, max_slides)
        texts = []
        for _ in range(n_slides):
            words = [rng.choice(VOCAB) for _ in range(rng.randint(3, 10))]
            for _ in range(rng.randint(0, 3)):
                words.insert(rng.randrange(len(words) + 1), rng.choice(phrases))
            texts.append(" ".join(words))
        decks.append(
            make_deck(
                f"deck-{i:03d}",
                texts,
                shared_by=rng.choice(sharers),
                shared_at=date(2019, 1, 1) + timedelta(days=rng.randint(0, 700)),
                title=f"{rng.choice(VOCAB).title()} {rng.choice(VOCAB)} {i}",
            )
        )
    return Corpus.build(decks, make_dicts(PRODUCTS, KEYWORDS, BUZZWORDS))


@pytest.fixture
def small_corpus():
    return random_corpus(seed=7, n_decks=24)


def synthetic_manifest(path, n_decks=3500, total_slides=90000, seed=1):
    """Corpus-scale synthetic manifest: n_decks decks, exactly total_slides slides."""
    rng = random.Random(seed)
    base, extra = divmod(total_slides, n_decks)
    start = date(2015, 1, 1)
    with path.open("w", encoding="utf-8") as f:
        for i in range(n_decks):
            n_slides = base + (1 if i < extra else 0)
            slides = []
            for s in range(n_slides):
                words = " ".join(rng.choice(VOCAB) for _ in range(8))
                if rng.random() < 0.3:
                    words += " " + rng.choice(PRODUCTS + KEYWORDS + BUZZWORDS)
                slides.append({"index": s, "image": f"img/{i}/{s}.png", "text": words})
            record = {
                "id": f"d{i:04d}",
                "title": f"Deck {i}",
                "shared_by": f"user{i % 40}",
                "repository": "main",
                "shared_at": (start + timedelta(days=i % 2000)).isoformat(),
                "slides": slides,
            }
            f.write(json.dumps(record) + "\n")
    return path
