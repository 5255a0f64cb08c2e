"""Command-line entry points: ingest, serve, snapshot.

Every flag has a SKYGLYPH_-prefixed environment variable fallback, so a
deployment can be configured entirely through the environment.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .glyphs import ProductPalette, glyph_record
from .ingest import load_corpus
from .layout import SimConfig, Viewport
from .session import Session


def _env(name: str, default=None):
    return os.environ.get(f"SKYGLYPH_{name}", default)


def _add_corpus_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", default=_env("MANIFEST"), help="deck manifest (JSON array or NDJSON)")
    p.add_argument("--products", default=_env("PRODUCTS"), help="product phrases, one per line")
    p.add_argument("--keywords", default=_env("KEYWORDS"), help="keyword phrases, one per line")
    p.add_argument("--buzzwords", default=_env("BUZZWORDS"), help="buzzword phrases, one per line")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skyglyphs")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="compute metrics, stats and glyphs for a manifest")
    _add_corpus_flags(ingest)
    ingest.add_argument("--out", required=True, help="output JSON path")

    serve = sub.add_parser("serve", help="run the exploration server")
    _add_corpus_flags(serve)
    serve.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    serve.add_argument("--port", type=int, default=int(_env("PORT", "8000")))
    serve.add_argument("--seed", type=int, default=int(_env("SEED", "42")))
    serve.add_argument("--frame-rate", type=float, default=float(_env("FRAME_RATE", "30")))
    serve.add_argument("--asset-root", default=_env("ASSET_ROOT", "."))
    serve.add_argument("--expand-seconds", type=float, default=float(_env("EXPAND_SECONDS", "0.4")))
    serve.add_argument("--pop-seconds", type=float, default=float(_env("POP_SECONDS", "1.5")))
    serve.add_argument("--idle-seconds", type=float, default=float(_env("IDLE_SECONDS", "30")))
    serve.add_argument("--command-log-dir", default=_env("COMMAND_LOG_DIR"))

    snapshot = sub.add_parser("snapshot", help="run the layout offline and dump one frame")
    _add_corpus_flags(snapshot)
    snapshot.add_argument("--seed", type=int, default=int(_env("SEED", "42")))
    snapshot.add_argument("--ticks", type=int, default=0)
    snapshot.add_argument("--out", required=True)

    return parser


def _require_manifest(args) -> None:
    if not args.manifest:
        sys.exit("error: --manifest (or SKYGLYPH_MANIFEST) is required")


def _dumps(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def run_ingest(args) -> int:
    _require_manifest(args)
    corpus = load_corpus(args.manifest, args.products, args.keywords, args.buzzwords)
    palette = ProductPalette.from_dictionary(corpus.dictionaries["product"])
    decks = []
    for deck in corpus.decks:
        m = corpus.metrics[deck.deck_id]
        decks.append(
            {
                "deck_id": deck.deck_id,
                "title": deck.title,
                "shared_by": deck.shared_by,
                "repository": deck.repository,
                "shared_at": deck.shared_at.isoformat(),
                "metrics": {
                    "n_slides": m.n_slides,
                    "n_words": m.n_words,
                    "n_keywords": m.n_keywords,
                    "n_buzzwords": m.n_buzzwords,
                    "product_mentions": dict(m.product_mentions),
                    "keyword_mentions": dict(m.keyword_mentions),
                    "buzzword_mentions": dict(m.buzzword_mentions),
                    "dominant_product": m.dominant_product,
                },
                "glyph": glyph_record(deck, m, corpus.stats, palette),
            }
        )
    payload = {
        "stats": {
            "axis_max": dict(corpus.stats.axis_max),
            "date_min": corpus.stats.date_min.isoformat(),
            "date_max": corpus.stats.date_max.isoformat(),
            "n_decks": corpus.stats.n_decks,
            "n_slides_total": corpus.stats.n_slides_total,
        },
        "decks": decks,
    }
    Path(args.out).write_text(_dumps(payload) + "\n", encoding="utf-8")
    print(f"ingested {corpus.stats.n_decks} decks / {corpus.stats.n_slides_total} slides -> {args.out}")
    return 0


def run_serve(args) -> int:
    import uvicorn

    from .server import ServerConfig, create_app

    _require_manifest(args)
    cfg = ServerConfig(
        manifest=args.manifest,
        products=args.products,
        keywords=args.keywords,
        buzzwords=args.buzzwords,
        host=args.host,
        port=args.port,
        seed=args.seed,
        frame_rate=args.frame_rate,
        asset_root=args.asset_root,
        expand_seconds=args.expand_seconds,
        pop_seconds=args.pop_seconds,
        idle_seconds=args.idle_seconds,
        command_log_dir=args.command_log_dir,
    )
    app = create_app(cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")
    return 0


def run_snapshot(args) -> int:
    _require_manifest(args)
    corpus = load_corpus(args.manifest, args.products, args.keywords, args.buzzwords)
    palette = ProductPalette.from_dictionary(corpus.dictionaries["product"])
    session = Session(corpus, cfg=SimConfig(seed=args.seed), viewport=Viewport())
    if args.ticks:
        session.execute({"type": "tick", "args": {"steps": args.ticks}})
    payload = session.frame_payload()
    payload["glyphs"] = [
        glyph_record(d, corpus.metrics[d.deck_id], corpus.stats, palette)
        for d in corpus.decks
    ]
    Path(args.out).write_text(_dumps(payload) + "\n", encoding="utf-8")
    print(f"snapshot at tick {session.sim.tick} -> {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "ingest":
        return run_ingest(args)
    if args.command == "serve":
        return run_serve(args)
    if args.command == "snapshot":
        return run_snapshot(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())
