"""HTTP surface: corpus summaries, deck details, slide images, sessions.

Each session runs its own simulation, advanced by a background ticker that
logs explicit tick commands, so a session's command log alone replays it.
Frames stream to any number of consumers as newline-delimited JSON; a slow
consumer only ever drops frames for itself, never stalls the ticker.
"""

from __future__ import annotations

import asyncio
import json
import os
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import FileResponse, Response, StreamingResponse

from .glyphs import AXIS_ORDER, SPIKE_VERTEX, ProductPalette, glyph_record
from .ingest import Corpus, load_corpus
from .layout import SimConfig, Viewport
from .session import Session, SessionTuning


@dataclass
class ServerConfig:
    manifest: str
    products: str | None = None
    keywords: str | None = None
    buzzwords: str | None = None
    host: str = "127.0.0.1"
    port: int = 8000
    seed: int = 42
    frame_rate: float = 30.0
    asset_root: str = "."
    max_sessions: int = 64
    viewport_width: float = 1920.0
    viewport_height: float = 1080.0
    expand_seconds: float = 0.4
    pop_seconds: float = 1.5
    idle_seconds: float = 30.0
    command_log_dir: str | None = None
    auto_tick: bool = True  # off: time only advances via posted tick commands

    def __post_init__(self):
        tick_rate = 1.0 / SimConfig().dt
        if self.frame_rate > tick_rate:
            raise ValueError(f"frame rate {self.frame_rate} exceeds tick rate {tick_rate}")


def _dumps(payload: object) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


@dataclass
class _SessionRuntime:
    session: Session
    lock: asyncio.Lock
    subscribers: list[asyncio.Queue] = field(default_factory=list)
    ticker: asyncio.Task | None = None
    latest_frame: str = ""

    def publish(self, frame: str) -> None:
        self.latest_frame = frame
        for q in self.subscribers:
            if q.full():
                try:
                    q.get_nowait()  # keep-latest: drop the stale frame
                except asyncio.QueueEmpty:
                    pass
            q.put_nowait(frame)


def create_app(cfg: ServerConfig) -> FastAPI:
    corpus = load_corpus(cfg.manifest, cfg.products, cfg.keywords, cfg.buzzwords)
    return create_app_from_corpus(corpus, cfg)


def create_app_from_corpus(corpus: Corpus, cfg: ServerConfig) -> FastAPI:
    sessions: dict[str, _SessionRuntime] = {}

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        for rt in sessions.values():
            if rt.ticker is not None:
                rt.ticker.cancel()

    app = FastAPI(title="skyglyphs", lifespan=lifespan)
    palette = ProductPalette.from_dictionary(corpus.dictionaries["product"])
    glyphs = {
        d.deck_id: glyph_record(d, corpus.metrics[d.deck_id], corpus.stats, palette)
        for d in corpus.decks
    }
    corpus_payload = _dumps(
        [
            {**glyphs[deck_id], "title": corpus.deck(deck_id).title}
            for deck_id in sorted(glyphs)
        ]
    )
    counter = {"n": 0}
    asset_root = Path(cfg.asset_root).resolve()
    tuning = SessionTuning(cfg.expand_seconds, cfg.pop_seconds, cfg.idle_seconds)
    ticks_per_frame = max(1, round((1.0 / SimConfig().dt) / cfg.frame_rate))

    app.state.corpus = corpus
    app.state.config = cfg

    @app.get("/corpus")
    def get_corpus() -> Response:
        return Response(content=corpus_payload, media_type="application/json")

    @app.get("/decks/{deck_id}")
    def get_deck_details(deck_id: str) -> Response:
        try:
            deck = corpus.deck(deck_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown deck {deck_id!r}")
        m = corpus.metrics[deck_id]
        terms = []
        for category, mentions in (
            ("product", m.product_mentions),
            ("keyword", m.keyword_mentions),
            ("buzzword", m.buzzword_mentions),
        ):
            for term in sorted(mentions):
                terms.append({"term": term, "category": category, "count": mentions[term]})
        payload = {
            "deck_id": deck.deck_id,
            "title": deck.title,
            "shared_by": deck.shared_by,
            "repository": deck.repository,
            "shared_at": deck.shared_at.isoformat(),
            "slides": [{"index": s.slide_index, "image": s.image_ref} for s in deck.slides],
            "axes": [
                {"axis": a, "value": m.axis_value(a), "vertex": SPIKE_VERTEX[a]}
                for a in AXIS_ORDER
            ],
            "terms": terms,
            "glyph": glyphs[deck_id],
        }
        return Response(content=_dumps(payload), media_type="application/json")

    @app.get("/decks/{deck_id}/slides/{n}/image")
    def get_slide_image(deck_id: str, n: int):
        try:
            deck = corpus.deck(deck_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown deck {deck_id!r}")
        if not 0 <= n < len(deck.slides):
            raise HTTPException(status_code=404, detail=f"no slide {n}")
        path = (asset_root / deck.slides[n].image_ref).resolve()
        if not path.is_relative_to(asset_root):
            raise HTTPException(status_code=404, detail="image outside asset root")
        if not path.is_file():
            raise HTTPException(status_code=404, detail="image not found")
        return FileResponse(path)

    async def _ticker(rt: _SessionRuntime) -> None:
        interval = 1.0 / cfg.frame_rate
        while True:
            async with rt.lock:
                rt.session.execute({"type": "tick", "args": {"steps": ticks_per_frame}})
                frame = _dumps(rt.session.frame_payload())
                rt.publish(frame)
            await asyncio.sleep(interval)

    def _write_log(rt: _SessionRuntime) -> None:
        if cfg.command_log_dir is None:
            return
        log_dir = Path(cfg.command_log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        path = log_dir / f"{rt.session.session_id}.ndjson"
        with path.open("w", encoding="utf-8") as f:
            for cmd in rt.session.command_log:
                f.write(_dumps(cmd) + "\n")

    @app.post("/sessions")
    async def open_session(body: dict = Body(default={})) -> dict:
        if len(sessions) >= cfg.max_sessions:
            raise HTTPException(status_code=503, detail="session capacity exceeded")
        seed = body.get("seed", cfg.seed)
        if not isinstance(seed, int):
            raise HTTPException(status_code=422, detail="seed must be an integer")
        counter["n"] += 1
        session_id = f"s{counter['n']}"
        sim_cfg = SimConfig(seed=seed)
        viewport = Viewport(width=cfg.viewport_width, height=cfg.viewport_height)
        session = Session(
            corpus, cfg=sim_cfg, tuning=tuning, viewport=viewport, session_id=session_id
        )
        rt = _SessionRuntime(session=session, lock=asyncio.Lock())
        rt.latest_frame = _dumps(session.frame_payload())
        if cfg.auto_tick:
            rt.ticker = asyncio.get_running_loop().create_task(_ticker(rt))
        sessions[session_id] = rt
        return {"session_id": session_id, "seed": seed, "state_version": session.state_version}

    def _runtime(session_id: str) -> _SessionRuntime:
        rt = sessions.get(session_id)
        if rt is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return rt

    @app.post("/sessions/{session_id}/commands")
    async def post_command(session_id: str, command: dict = Body(...)) -> dict:
        rt = _runtime(session_id)
        async with rt.lock:
            result = rt.session.execute(command)
            _write_log(rt)
            rt.publish(_dumps(rt.session.frame_payload()))
        return result

    @app.get("/sessions/{session_id}/frames")
    async def stream_frames(session_id: str, limit: int | None = None):
        rt = _runtime(session_id)

        async def gen():
            queue: asyncio.Queue = asyncio.Queue(maxsize=1)
            rt.subscribers.append(queue)
            try:
                sent = 0
                yield rt.latest_frame + "\n"
                sent += 1
                while limit is None or sent < limit:
                    frame = await queue.get()
                    yield frame + "\n"
                    sent += 1
            finally:
                rt.subscribers.remove(queue)

        return StreamingResponse(gen(), media_type="application/x-ndjson")

    @app.get("/sessions/{session_id}/log")
    async def get_command_log(session_id: str):
        rt = _runtime(session_id)
        async with rt.lock:
            lines = "".join(_dumps(cmd) + "\n" for cmd in rt.session.command_log)
        return Response(content=lines, media_type="application/x-ndjson")

    @app.get("/sessions/{session_id}/state")
    async def get_state(session_id: str):
        rt = _runtime(session_id)
        async with rt.lock:
            return Response(
                content=_dumps(rt.session.frame_payload()), media_type="application/json"
            )

    return app


def config_from_env(**overrides) -> ServerConfig:
    """Build a ServerConfig from SKYGLYPH_* environment variables, then
    apply explicit overrides (CLI flags win over the environment)."""

    def env(name: str, cast=str, default=None):
        raw = os.environ.get(f"SKYGLYPH_{name}")
        return cast(raw) if raw is not None else default

    values = {
        "manifest": env("MANIFEST"),
        "products": env("PRODUCTS"),
        "keywords": env("KEYWORDS"),
        "buzzwords": env("BUZZWORDS"),
        "host": env("HOST", str, "127.0.0.1"),
        "port": env("PORT", int, 8000),
        "seed": env("SEED", int, 42),
        "frame_rate": env("FRAME_RATE", float, 30.0),
        "asset_root": env("ASSET_ROOT", str, "."),
        "max_sessions": env("MAX_SESSIONS", int, 64),
        "expand_seconds": env("EXPAND_SECONDS", float, 0.4),
        "pop_seconds": env("POP_SECONDS", float, 1.5),
        "idle_seconds": env("IDLE_SECONDS", float, 30.0),
        "command_log_dir": env("COMMAND_LOG_DIR"),
    }
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    if values["manifest"] is None:
        raise ValueError("a manifest path is required (flag --manifest or SKYGLYPH_MANIFEST)")
    return ServerConfig(**values)
