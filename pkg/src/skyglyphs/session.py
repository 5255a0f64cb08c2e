"""Session command model: clusters, sorting, collections, popping, idling.

A session owns one simulation over the corpus plus the user-facing state
(collection, pop phases, menu visibility). Commands arrive as JSON-style
dicts ``{"type": ..., "args": {...}}``, are applied strictly in order, and
are appended to an in-memory log; replaying the log against the same corpus
and seed reproduces the session bit for bit. Session time is derived from
the tick counter, never from a wall clock.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Mapping, Sequence

from .glyphs import ProductPalette, depth_of, slide_metrics, visual_of
from .ingest import AXES, Corpus
from .layout import SimConfig, Simulation, Viewport


class CommandError(Exception):
    """A well-formed command that cannot be applied; the state is unchanged."""


@dataclass
class SessionTuning:
    """User-interaction timing, in seconds of simulation time."""

    expand_seconds: float = 0.4
    pop_seconds: float = 1.5
    idle_seconds: float = 30.0


POP_PHASES = ("idle", "expanding", "shaking", "popped")


@dataclass
class PopState:
    phase: str
    start_tick: int
    released: bool = False
    slide_node_ids: tuple[str, ...] = ()
    bundle_anchor: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class ItemRef:
    kind: str  # deck | slide | cluster
    id: str


SORT_ATTRIBUTES = AXES + ("shared_at",)


class Session:
    def __init__(
        self,
        corpus: Corpus,
        cfg: SimConfig | None = None,
        tuning: SessionTuning | None = None,
        viewport: Viewport | None = None,
        session_id: str = "session",
    ):
        self.session_id = session_id
        self.corpus = corpus
        self.cfg = cfg or SimConfig()
        self.tuning = tuning or SessionTuning()
        self.palette = ProductPalette.from_dictionary(corpus.dictionaries["product"])
        self.sim = Simulation(self.cfg, replace(viewport) if viewport else None)
        self.state_version = 0
        self.sort: tuple[str, str] | None = None
        self.command_log: list[dict] = []
        self.collection: list[ItemRef] = []
        self.collection_filter_on = False
        self.popped: dict[str, PopState] = {}
        self.menus_visible = False
        self.last_activity_tick: int | None = None
        self._expand_ticks = max(1, round(self.tuning.expand_seconds / self.cfg.dt))
        self._pop_ticks = max(1, round(self.tuning.pop_seconds / self.cfg.dt))
        self._idle_ticks = max(1, round(self.tuning.idle_seconds / self.cfg.dt))
        self._spawn_decks()
        self.sim.init_layout()

    def _spawn_decks(self) -> None:
        for deck in self.corpus.decks:
            metrics = self.corpus.metrics[deck.deck_id]
            depth = depth_of(deck.shared_at, self.corpus.stats)
            visual = visual_of(metrics, depth, "hot_air_deck", self.palette)
            self.sim.add_node(
                deck.deck_id,
                radius=self.cfg.base_radius * visual.scale,
                opacity=visual.opacity,
            )

    # -- clocks ------------------------------------------------------------

    @property
    def now(self) -> float:
        return self.sim.tick * self.cfg.dt

    # -- command entry point -------------------------------------------------

    def execute(self, command: object) -> dict:
        version = self.state_version
        if not isinstance(command, Mapping):
            return {"ok": False, "message": "command must be an object", "state_version": version}
        ctype = command.get("type")
        args = command.get("args") or {}
        if not isinstance(ctype, str) or not isinstance(args, Mapping):
            return {"ok": False, "message": "command needs a string type and object args", "state_version": version}
        handler = _HANDLERS.get(ctype)
        if handler is None:
            return {"ok": False, "message": f"unknown command type {ctype!r}", "state_version": version}
        self.command_log.append({"type": ctype, "args": dict(args), "client_time": command.get("client_time")})
        try:
            handler(self, args)
        except CommandError as exc:
            return {"ok": False, "message": str(exc), "state_version": version}
        self.state_version = version + 1
        return {"ok": True, "message": None, "state_version": self.state_version}

    # -- clustering ------------------------------------------------------------

    def cluster_member_decks(self, anchor_type: str, key: str) -> list[str]:
        """Deck ids satisfying the cluster predicate, in corpus order."""
        members = []
        for deck in self.corpus.decks:
            m = self.corpus.metrics[deck.deck_id]
            if anchor_type == "shared_by":
                hit = deck.shared_by == key
            elif anchor_type == "product":
                hit = key in m.product_mentions
            elif anchor_type == "term":
                hit = key in m.keyword_mentions or key in m.buzzword_mentions
            elif anchor_type == "title":
                hit = key.lower() in deck.title.lower()
            else:
                raise CommandError(f"unknown cluster type {anchor_type!r}")
            if hit:
                members.append(deck.deck_id)
        return members

    def cluster_members(self, cluster_id: str) -> set[str]:
        """Hover query: the exact member set of one cluster."""
        anchor = self.sim.anchors.get(cluster_id)
        if anchor is None:
            raise KeyError(cluster_id)
        return set(anchor.member_ids)

    def _cmd_cluster_by(self, args: Mapping) -> None:
        anchor_type = _require_str(args, "anchor_type")
        key = _require_str(args, "key")
        if anchor_type not in ("shared_by", "product", "term", "title"):
            raise CommandError(f"unknown cluster type {anchor_type!r}")
        members = self.cluster_member_decks(anchor_type, key)
        if not members:
            raise CommandError(f"no decks match {anchor_type}={key!r}")
        if f"{anchor_type}:{key}" in self.sim.anchors:
            raise CommandError(f"cluster {anchor_type}:{key} already exists")
        self.sim.apply_cluster(anchor_type, key, members)

    def _cmd_remove_cluster(self, args: Mapping) -> None:
        cluster_id = _require_str(args, "cluster_id")
        if cluster_id not in self.sim.anchors:
            raise CommandError(f"unknown cluster {cluster_id!r}")
        self.sim.remove_cluster(cluster_id)

    def _cmd_find_similar(self, args: Mapping) -> None:
        term = _require_str(args, "term")
        category = self._term_category(term)
        if category is None:
            raise CommandError(f"term {term!r} is not mentioned by any deck")
        self._cmd_cluster_by({"anchor_type": category, "key": term})

    def _term_category(self, term: str) -> str | None:
        for deck in self.corpus.decks:
            m = self.corpus.metrics[deck.deck_id]
            if term in m.product_mentions:
                return "product"
        for deck in self.corpus.decks:
            m = self.corpus.metrics[deck.deck_id]
            if term in m.keyword_mentions or term in m.buzzword_mentions:
                return "term"
        return None

    def _cmd_search_title(self, args: Mapping) -> None:
        text = _require_str(args, "text")
        self._cmd_cluster_by({"anchor_type": "title", "key": text})

    # -- sorting ------------------------------------------------------------------

    def _cmd_sort(self, args: Mapping) -> None:
        attribute = _require_str(args, "attribute")
        order = _require_str(args, "order")
        if attribute not in SORT_ATTRIBUTES:
            raise CommandError(f"unknown sort attribute {attribute!r}")
        if order not in ("asc", "desc"):
            raise CommandError(f"order must be asc or desc, got {order!r}")
        ordering = self.sorted_deck_ids(attribute, order)
        self.sim.clear_grid()
        self.sim.arrange_grid(ordering)
        self.sort = (attribute, order)

    def sorted_deck_ids(self, attribute: str, order: str) -> list[str]:
        """Visible deck nodes in grid order: attribute first, deck_id tiebreak."""
        visible = [
            d.deck_id
            for d in self.corpus.decks
            if d.deck_id in self.sim.nodes and not self.sim.nodes[d.deck_id].hidden
        ]

        def value(deck_id: str):
            if attribute == "shared_at":
                return self.corpus.deck(deck_id).shared_at
            return self.corpus.metrics[deck_id].axis_value(attribute)

        visible.sort(key=lambda d: d)  # tiebreak first; the next sort is stable
        visible.sort(key=value, reverse=(order == "desc"))
        return visible

    def _cmd_clear_sort(self, args: Mapping) -> None:
        self.sim.clear_grid()
        self.sort = None

    # -- collections -----------------------------------------------------------------

    def _resolve_item(self, args: Mapping) -> ItemRef:
        kind = _require_str(args, "kind")
        item_id = _require_str(args, "id")
        if kind == "deck":
            if item_id not in self.corpus.metrics:
                raise CommandError(f"unknown deck {item_id!r}")
        elif kind == "slide":
            node = self.sim.nodes.get(item_id)
            if node is None or "/s" not in item_id:
                raise CommandError(f"unknown slide node {item_id!r}")
        elif kind == "cluster":
            anchor = self.sim.anchors.get(item_id)
            if anchor is None or anchor.anchor_type == "bundle":
                raise CommandError(f"unknown cluster {item_id!r}")
        else:
            raise CommandError(f"unknown item kind {kind!r}")
        return ItemRef(kind, item_id)

    def _cmd_add_to_collection(self, args: Mapping) -> None:
        item = self._resolve_item(args)
        if item in self.collection:
            raise CommandError(f"{item.kind} {item.id!r} already in collection")
        self.collection.append(item)
        self._refresh_visibility()

    def _cmd_remove_from_collection(self, args: Mapping) -> None:
        item = self._resolve_item(args)
        if item not in self.collection:
            raise CommandError(f"{item.kind} {item.id!r} not in collection")
        self.collection.remove(item)
        self._refresh_visibility()

    def _cmd_toggle_collection_filter(self, args: Mapping) -> None:
        self.collection_filter_on = not self.collection_filter_on
        self._refresh_visibility()

    def _cmd_clear_collection(self, args: Mapping) -> None:
        self.collection.clear()
        self._refresh_visibility()

    def collection_node_ids(self) -> set[str]:
        """Collected items expanded to node ids: clusters to their member
        decks, decks to themselves plus any spawned slide balloons."""
        allowed: set[str] = set()

        def add_deck(deck_id: str) -> None:
            allowed.add(deck_id)
            pop = self.popped.get(deck_id)
            if pop is not None:
                allowed.update(pop.slide_node_ids)

        for item in self.collection:
            if item.kind == "deck":
                add_deck(item.id)
            elif item.kind == "slide":
                allowed.add(item.id)
            elif item.kind == "cluster":
                anchor = self.sim.anchors.get(item.id)
                if anchor is None:
                    continue
                for member in anchor.member_ids:
                    add_deck(member)
        return allowed

    def _refresh_visibility(self) -> None:
        allowed = self.collection_node_ids() if self.collection_filter_on else None
        for nid, node in self.sim.nodes.items():
            pop_hidden = nid in self.popped and self.popped[nid].phase == "popped"
            filter_hidden = allowed is not None and nid not in allowed
            node.hidden = pop_hidden or filter_hidden

    # -- popping ----------------------------------------------------------------------

    def _deck_node(self, deck_id: str):
        node = self.sim.nodes.get(deck_id)
        if node is None or deck_id not in self.corpus.metrics:
            raise CommandError(f"unknown deck {deck_id!r}")
        return node

    def _cmd_press_start(self, args: Mapping) -> None:
        deck_id = _require_str(args, "deck_id")
        node = self._deck_node(deck_id)
        existing = self.popped.get(deck_id)
        if existing is not None:
            raise CommandError(f"deck {deck_id!r} already pressed or popped")
        if node.hidden:
            raise CommandError(f"deck {deck_id!r} is hidden")
        self.popped[deck_id] = PopState(phase="expanding", start_tick=self.sim.tick)

    def _cmd_press_end(self, args: Mapping) -> None:
        deck_id = _require_str(args, "deck_id")
        pop = self.popped.get(deck_id)
        if pop is None:
            raise CommandError(f"press_end without press_start for {deck_id!r}")
        if pop.phase == "popped":
            return
        elapsed = self.sim.tick - pop.start_tick
        if elapsed < self._expand_ticks:
            # released during the expand preview: revert, nothing spawns
            del self.popped[deck_id]
        else:
            # the shake is committed; the deck pops even though the press ended
            pop.released = True

    def press_phase(self, deck_id: str) -> str:
        pop = self.popped.get(deck_id)
        if pop is None:
            return "idle"
        return pop.phase

    def _advance_presses(self) -> None:
        for deck_id in list(self.popped):
            pop = self.popped[deck_id]
            if pop.phase == "popped":
                continue
            elapsed = self.sim.tick - pop.start_tick
            if elapsed >= self._pop_ticks:
                self._pop_deck(deck_id, pop)
            elif elapsed >= self._expand_ticks:
                pop.phase = "shaking"

    def _pop_deck(self, deck_id: str, pop: PopState) -> None:
        deck = self.corpus.deck(deck_id)
        node = self.sim.nodes[deck_id]
        pop.bundle_anchor = (node.x, node.y)
        ring = self.cfg.pop_ring_factor * node.radius
        depth = depth_of(deck.shared_at, self.corpus.stats)
        slide_ids = []
        n = len(deck.slides)
        for slide in deck.slides:
            sid = f"{deck_id}/s{slide.slide_index}"
            metrics = slide_metrics(slide.text, self.corpus.dictionaries)
            visual = visual_of(metrics, depth, "simple_slide", self.palette)
            snode = self.sim.add_node(
                sid,
                radius=self.cfg.base_radius * self.cfg.slide_radius_factor * visual.scale,
                opacity=visual.opacity,
            )
            angle = 2.0 * math.pi * slide.slide_index / n
            snode.x = node.x + ring * math.cos(angle)
            snode.y = node.y + ring * math.sin(angle)
            slide_ids.append(sid)
        bundle = self.sim.apply_cluster("bundle", deck_id, slide_ids)
        bundle.x, bundle.y = pop.bundle_anchor
        pop.slide_node_ids = tuple(slide_ids)
        pop.phase = "popped"
        self._refresh_visibility()

    def _cmd_restore_deck(self, args: Mapping) -> None:
        deck_id = _require_str(args, "deck_id")
        pop = self.popped.get(deck_id)
        if pop is None or pop.phase != "popped":
            raise CommandError(f"deck {deck_id!r} is not popped")
        for sid in pop.slide_node_ids:
            if sid in self.sim.nodes:
                self.sim.remove_node(sid)
        bundle_id = f"bundle:{deck_id}"
        if bundle_id in self.sim.anchors:
            self.sim.remove_cluster(bundle_id)
        node = self.sim.nodes[deck_id]
        node.x, node.y = pop.bundle_anchor
        node.vx = node.vy = 0.0
        removed = set(pop.slide_node_ids)
        self.collection = [it for it in self.collection if not (it.kind == "slide" and it.id in removed)]
        del self.popped[deck_id]
        self._refresh_visibility()

    # -- direct manipulation --------------------------------------------------------------

    def _node_or_fail(self, args: Mapping):
        node_id = _require_str(args, "node_id")
        node = self.sim.nodes.get(node_id)
        if node is None:
            raise CommandError(f"unknown node {node_id!r}")
        return node

    def _cmd_drag(self, args: Mapping) -> None:
        node = self._node_or_fail(args)
        node.x = _require_number(args, "x")
        node.y = _require_number(args, "y")
        node.vx = node.vy = 0.0

    def _cmd_pin(self, args: Mapping) -> None:
        node = self._node_or_fail(args)
        node.pinned = True
        node.vx = node.vy = 0.0

    def _cmd_unpin(self, args: Mapping) -> None:
        node = self._node_or_fail(args)
        node.pinned = False

    def _cmd_pan(self, args: Mapping) -> None:
        self.sim.viewport.cx += _require_number(args, "dx")
        self.sim.viewport.cy += _require_number(args, "dy")

    def _cmd_enter_overview(self, args: Mapping) -> None:
        self.sim.enter_overview()

    def _cmd_leave_overview(self, args: Mapping) -> None:
        self.sim.leave_overview()

    # -- ambient behaviour ------------------------------------------------------------------

    def _cmd_activity(self, args: Mapping) -> None:
        self.last_activity_tick = self.sim.tick
        self.menus_visible = True

    def _cmd_tick(self, args: Mapping) -> None:
        steps = args.get("steps", 1)
        if not isinstance(steps, int) or steps < 1:
            raise CommandError("steps must be a positive integer")
        for _ in range(steps):
            self.sim.step()
            self._advance_presses()
        self._update_idle()

    def _update_idle(self) -> None:
        if self.last_activity_tick is None:
            self.menus_visible = False
        else:
            self.menus_visible = (self.sim.tick - self.last_activity_tick) <= self._idle_ticks

    # -- outputs --------------------------------------------------------------------------------

    def frame_payload(self) -> dict:
        frame = self.sim.frame()
        frame["session"] = {
            "state_version": self.state_version,
            "menus_visible": self.menus_visible,
            "collection": [{"kind": it.kind, "id": it.id} for it in self.collection],
            "collection_filter_on": self.collection_filter_on,
            "popped": {d: p.phase for d, p in sorted(self.popped.items())},
        }
        return frame

    def minimap(self) -> dict:
        return self.sim.minimap_view()


def _require_str(args: Mapping, key: str) -> str:
    value = args.get(key)
    if not isinstance(value, str) or not value:
        raise CommandError(f"missing or invalid {key!r}")
    return value


def _require_number(args: Mapping, key: str) -> float:
    value = args.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CommandError(f"missing or invalid {key!r}")
    return float(value)


_HANDLERS: dict[str, Callable[[Session, Mapping], None]] = {
    "cluster_by": Session._cmd_cluster_by,
    "remove_cluster": Session._cmd_remove_cluster,
    "sort": Session._cmd_sort,
    "clear_sort": Session._cmd_clear_sort,
    "add_to_collection": Session._cmd_add_to_collection,
    "remove_from_collection": Session._cmd_remove_from_collection,
    "toggle_collection_filter": Session._cmd_toggle_collection_filter,
    "clear_collection": Session._cmd_clear_collection,
    "press_start": Session._cmd_press_start,
    "press_end": Session._cmd_press_end,
    "restore_deck": Session._cmd_restore_deck,
    "drag": Session._cmd_drag,
    "pin": Session._cmd_pin,
    "unpin": Session._cmd_unpin,
    "pan": Session._cmd_pan,
    "enter_overview": Session._cmd_enter_overview,
    "leave_overview": Session._cmd_leave_overview,
    "find_similar": Session._cmd_find_similar,
    "search_title": Session._cmd_search_title,
    "activity": Session._cmd_activity,
    "tick": Session._cmd_tick,
}


def replay(
    corpus: Corpus,
    commands: Sequence[Mapping],
    cfg: SimConfig | None = None,
    tuning: SessionTuning | None = None,
    viewport: Viewport | None = None,
) -> Session:
    """Rebuild a session by applying a logged command sequence in order."""
    session = Session(corpus, cfg=cfg, tuning=tuning, viewport=viewport)
    for cmd in commands:
        session.execute(cmd)
    return session
