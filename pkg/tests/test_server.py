import json
from datetime import date

import pytest
from fastapi.testclient import TestClient

from skyglyphs.glyphs import AXIS_ORDER, ProductPalette, glyph_record
from skyglyphs.ingest import Corpus
from skyglyphs.layout import SimConfig, Viewport
from skyglyphs.server import ServerConfig, create_app_from_corpus
from skyglyphs.session import Session, SessionTuning, replay

from conftest import make_deck, make_dicts, random_corpus, write_manifest


def server_config(tmp_path, **kwargs):
    manifest = tmp_path / "manifest.json"
    if not manifest.exists():
        write_manifest(manifest, [make_deck("d0", ["placeholder"])])
    defaults = dict(manifest=str(manifest), asset_root=str(tmp_path), auto_tick=False)
    defaults.update(kwargs)
    return ServerConfig(**defaults)


@pytest.fixture
def corpus():
    return random_corpus(seed=13, n_decks=12)


@pytest.fixture
def client(corpus, tmp_path):
    cfg = server_config(tmp_path)
    app = create_app_from_corpus(corpus, cfg)
    with TestClient(app) as c:
        yield c


def open_session(client, seed=7):
    r = client.post("/sessions", json={"seed": seed})
    assert r.status_code == 200
    return r.json()["session_id"]


def post(client, sid, ctype, **args):
    return client.post(f"/sessions/{sid}/commands", json={"type": ctype, "args": args}).json()


# -- corpus and deck endpoints ------------------------------------------------


def test_corpus_sorted_and_matches_glyph_module(client, corpus):
    r = client.get("/corpus")
    assert r.status_code == 200
    payload = r.json()
    ids = [d["deck_id"] for d in payload]
    assert ids == sorted(ids)
    palette = ProductPalette.from_dictionary(corpus.dictionaries["product"])
    for entry in payload:
        deck = corpus.deck(entry["deck_id"])
        expected = glyph_record(deck, corpus.metrics[deck.deck_id], corpus.stats, palette)
        assert entry["vertices"] == expected["vertices"]
        assert entry["axis_values"] == expected["axis_values"]
        assert entry["colour_index"] == expected["colour_index"]
        assert entry["title"] == deck.title


def test_corpus_payload_bytes_stable(client):
    a = client.get("/corpus").content
    b = client.get("/corpus").content
    assert a == b


def test_empty_corpus_serves_empty_list(tmp_path):
    empty = Corpus.build([], make_dicts())
    app = create_app_from_corpus(empty, server_config(tmp_path))
    with TestClient(app) as c:
        r = c.get("/corpus")
        assert r.status_code == 200
        assert r.json() == []


def test_empty_product_list_gives_empty_buttons(tmp_path):
    deck = make_deck("plain", ["no terms at all here"])
    corpus = Corpus.build([deck], make_dicts(products=["claytool"]))
    app = create_app_from_corpus(corpus, server_config(tmp_path))
    with TestClient(app) as c:
        detail = c.get("/decks/plain").json()
        assert [t for t in detail["terms"] if t["category"] == "product"] == []


def test_deck_details_buttons_sorted_and_axes_indexed(tmp_path):
    deck = make_deck("kw", ["cloud bim cloud", "cloud words"])
    corpus = Corpus.build([deck], make_dicts(keywords=["cloud", "bim"]))
    app = create_app_from_corpus(corpus, server_config(tmp_path))
    with TestClient(app) as c:
        detail = c.get("/decks/kw").json()
        kw_buttons = [(t["term"], t["count"]) for t in detail["terms"] if t["category"] == "keyword"]
        assert kw_buttons == [("bim", 1), ("cloud", 3)]
        assert [a["axis"] for a in detail["axes"]] == list(AXIS_ORDER)
        by_axis = {a["axis"]: a for a in detail["axes"]}
        assert by_axis["n_slides"]["vertex"] == 2
        assert by_axis["n_words"]["vertex"] == 0
        assert by_axis["n_keywords"]["vertex"] == 4
        assert by_axis["n_buzzwords"]["vertex"] == 6
        assert by_axis["n_keywords"]["value"] == 4
        assert detail["slides"] == [
            {"index": 0, "image": "kw/0.png"},
            {"index": 1, "image": "kw/1.png"},
        ]


def test_unknown_deck_404(client):
    assert client.get("/decks/nope").status_code == 404


def test_slide_image_served_and_bounded(tmp_path, corpus):
    cfg = server_config(tmp_path)
    deck = corpus.decks[0]
    img = tmp_path / deck.slides[0].image_ref
    img.parent.mkdir(parents=True, exist_ok=True)
    img.write_bytes(b"\x89PNG fake")
    app = create_app_from_corpus(corpus, cfg)
    with TestClient(app) as c:
        ok = c.get(f"/decks/{deck.deck_id}/slides/0/image")
        assert ok.status_code == 200
        assert ok.content == b"\x89PNG fake"
        assert c.get(f"/decks/{deck.deck_id}/slides/999/image").status_code == 404
        assert c.get("/decks/ghost/slides/0/image").status_code == 404


# -- sessions ------------------------------------------------------------------


def test_sessions_are_isolated(client):
    s1 = open_session(client)
    s2 = open_session(client)
    assert s1 != s2
    post(client, s1, "cluster_by", anchor_type="shared_by", key="ana")
    f1 = json.loads(client.get(f"/sessions/{s1}/state").content)
    f2 = json.loads(client.get(f"/sessions/{s2}/state").content)
    assert f1["anchors"] and not f2["anchors"]


def test_same_seed_sessions_identical_states(client):
    s1 = open_session(client, seed=99)
    s2 = open_session(client, seed=99)
    for sid in (s1, s2):
        post(client, sid, "tick", steps=120)
    f1 = client.get(f"/sessions/{s1}/state").content
    f2 = client.get(f"/sessions/{s2}/state").content
    assert f1 == f2


def test_unknown_session_404(client):
    assert client.get("/sessions/ghost/state").status_code == 404
    assert client.post("/sessions/ghost/commands", json={"type": "activity", "args": {}}).status_code == 404


def test_capacity_limit(tmp_path, corpus):
    app = create_app_from_corpus(corpus, server_config(tmp_path, max_sessions=2))
    with TestClient(app) as c:
        open_session(c)
        open_session(c)
        assert c.post("/sessions", json={}).status_code == 503


def test_command_ack_versions(client):
    sid = open_session(client)
    r1 = post(client, sid, "cluster_by", anchor_type="shared_by", key="ana")
    assert r1["ok"] and r1["state_version"] == 1
    r2 = post(client, sid, "cluster_by", anchor_type="product", key="nothing-here")
    assert not r2["ok"] and r2["state_version"] == 1
    r3 = post(client, sid, "activity")
    assert r3["ok"] and r3["state_version"] == 2


def test_malformed_command_rejected_without_version_change(client):
    sid = open_session(client)
    r = client.post(f"/sessions/{sid}/commands", json={"type": "no_such", "args": {}})
    assert r.status_code == 200
    body = r.json()
    assert body["ok"] is False and body["state_version"] == 0


# -- frame streaming ---------------------------------------------------------------


def read_frames(client, sid, limit):
    frames = []
    with client.stream("GET", f"/sessions/{sid}/frames", params={"limit": limit}) as r:
        for line in r.iter_lines():
            if line:
                frames.append(json.loads(line))
    return frames


def test_stream_delivers_current_frame_and_updates(client):
    sid = open_session(client)
    post(client, sid, "tick", steps=4)
    frames = read_frames(client, sid, limit=1)
    assert frames[0]["tick"] == 4
    assert frames[0]["session"]["state_version"] == 1


def test_frames_reflect_acked_commands(tmp_path, corpus):
    app = create_app_from_corpus(corpus, server_config(tmp_path, auto_tick=True, frame_rate=30))
    with TestClient(app) as c:
        sid = open_session(c)
        ack = post(c, sid, "cluster_by", anchor_type="shared_by", key="ana")
        assert ack["ok"]
        v = ack["state_version"]
        for frame in read_frames(c, sid, limit=6):
            if frame["session"]["state_version"] >= v:
                assert any(a["id"] == "shared_by:ana" for a in frame["anchors"])


def test_auto_tick_advances_and_is_monotone(tmp_path, corpus):
    app = create_app_from_corpus(corpus, server_config(tmp_path, auto_tick=True, frame_rate=30))
    with TestClient(app) as c:
        sid = open_session(c)
        frames = read_frames(c, sid, limit=5)
        ticks = [f["tick"] for f in frames]
        assert ticks == sorted(ticks)
        assert ticks[-1] > ticks[0]


def test_two_auto_sessions_agree_at_equal_ticks(tmp_path, corpus):
    app = create_app_from_corpus(corpus, server_config(tmp_path, auto_tick=True, frame_rate=30))
    with TestClient(app) as c:
        s1 = open_session(c, seed=5)
        s2 = open_session(c, seed=5)
        f1 = {f["tick"]: json.dumps(f, sort_keys=True) for f in read_frames(c, s1, 6)}
        f2 = {f["tick"]: json.dumps(f, sort_keys=True) for f in read_frames(c, s2, 6)}
        common = set(f1) & set(f2)
        assert common
        for t in common:
            assert f1[t] == f2[t]


def test_publish_keeps_only_latest_for_slow_consumers():
    import asyncio

    from skyglyphs.server import _SessionRuntime

    rt = _SessionRuntime(session=None, lock=asyncio.Lock())
    q: asyncio.Queue = asyncio.Queue(maxsize=1)
    rt.subscribers.append(q)
    rt.publish("frame-1")
    rt.publish("frame-2")  # slow consumer never read frame-1: it is dropped
    rt.publish("frame-3")
    assert q.qsize() == 1
    assert q.get_nowait() == "frame-3"


def test_config_from_env_and_overrides(tmp_path, monkeypatch):
    from skyglyphs.server import config_from_env

    manifest = tmp_path / "m.json"
    manifest.write_text("[]")
    monkeypatch.setenv("SKYGLYPH_MANIFEST", str(manifest))
    monkeypatch.setenv("SKYGLYPH_SEED", "123")
    monkeypatch.setenv("SKYGLYPH_PORT", "9123")
    monkeypatch.setenv("SKYGLYPH_FRAME_RATE", "15")
    cfg = config_from_env()
    assert cfg.manifest == str(manifest)
    assert cfg.seed == 123 and cfg.port == 9123 and cfg.frame_rate == 15.0
    # explicit overrides win over the environment
    cfg2 = config_from_env(seed=7)
    assert cfg2.seed == 7
    monkeypatch.delenv("SKYGLYPH_MANIFEST")
    with pytest.raises(ValueError, match="manifest"):
        config_from_env()


# -- replay oracle ---------------------------------------------------------------------


def test_posted_commands_equal_offline_replay(tmp_path, corpus):
    cfg = server_config(tmp_path)
    app = create_app_from_corpus(corpus, cfg)
    with TestClient(app) as c:
        sid = open_session(c, seed=31)
        decks = sorted(corpus.metrics)
        commands = []
        for i in range(100):
            kind = i % 5
            if kind == 0:
                commands.append({"type": "tick", "args": {"steps": 3}})
            elif kind == 1:
                commands.append({"type": "activity", "args": {}})
            elif kind == 2:
                commands.append({"type": "drag", "args": {"node_id": decks[i % len(decks)], "x": float(i), "y": float(-i)}})
            elif kind == 3:
                commands.append({"type": "pan", "args": {"dx": 1.0, "dy": 0.5}})
            else:
                commands.append({"type": "tick", "args": {"steps": 1}})
        for cmd in commands:
            c.post(f"/sessions/{sid}/commands", json=cmd)
        log = [json.loads(l) for l in c.get(f"/sessions/{sid}/log").text.splitlines()]
        state = c.get(f"/sessions/{sid}/state").content.decode()

    session = replay(
        corpus,
        log,
        cfg=SimConfig(seed=31),
        tuning=SessionTuning(cfg.expand_seconds, cfg.pop_seconds, cfg.idle_seconds),
        viewport=Viewport(width=cfg.viewport_width, height=cfg.viewport_height),
    )
    offline = json.dumps(session.frame_payload(), sort_keys=True, separators=(",", ":"))
    assert offline == state
