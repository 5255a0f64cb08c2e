"""Deterministic 2-D balloon simulation.

Balloons are collision circles drifting in an unbounded plane. Each tick
applies, in a fixed order: a slow per-node float force, one velocity kick per
cluster membership toward the cluster anchor, velocity damping, semi-implicit
Euler integration, then a few Gauss-Seidel passes of pairwise circle
separation found through a uniform spatial hash. All randomness comes from
splitmix64 streams keyed by ``seed XOR node ordinal``, so identical seeds and
command sequences reproduce bit-identical frames on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Tiny deterministic PRNG; the full state is one 64-bit integer."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * (self.next_u64() / 2**64)


@dataclass
class SimConfig:
    """Simulation parameters. ``cluster_stiffness`` is the fraction of the
    node-to-anchor offset added to velocity each tick (D3-style velocity
    force); float amplitude is an acceleration in world units/s^2."""

    seed: int = 42
    dt: float = 1.0 / 60.0
    damping: float = 0.9
    collision_strength: float = 0.5
    collision_iterations: int = 4
    cluster_stiffness: float = 0.05
    float_amplitude: float = 2.0
    float_omega: float = 0.5
    epsilon: float = 0.05
    base_radius: float = 30.0
    slide_radius_factor: float = 0.45
    pop_ring_factor: float = 3.0
    sort_cell_factor: float = 2.2
    init_relax_steps: int = 300

    def sort_cell(self) -> float:
        return self.sort_cell_factor * self.base_radius


@dataclass
class LayoutNode:
    node_id: str
    ordinal: int
    x: float = 0.0
    y: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    radius: float = 1.0
    opacity: float = 1.0
    float_phase: float = 0.0
    pinned: bool = False
    sorted_frozen: bool = False
    hidden: bool = False
    cluster_memberships: set[str] = field(default_factory=set)

    def movable(self) -> bool:
        return not (self.pinned or self.sorted_frozen or self.hidden)


@dataclass
class ClusterAnchor:
    cluster_id: str
    anchor_type: str  # shared_by | product | term | title | bundle
    key: str
    x: float
    y: float
    member_ids: tuple[str, ...]


@dataclass
class Viewport:
    cx: float = 0.0
    cy: float = 0.0
    zoom: float = 1.0
    width: float = 1920.0
    height: float = 1080.0

    def world_rect(self) -> tuple[float, float, float, float]:
        hw = self.width / self.zoom / 2.0
        hh = self.height / self.zoom / 2.0
        return (self.cx - hw, self.cy - hh, self.cx + hw, self.cy + hh)


ANCHOR_TYPES = ("shared_by", "product", "term", "title", "bundle")
MODES = ("detail", "overview", "sorted")


class Simulation:
    """Owns the node set, anchors, viewport, and the tick loop."""

    def __init__(self, cfg: SimConfig, viewport: Viewport | None = None):
        self.cfg = cfg
        self.tick = 0
        self.nodes: dict[str, LayoutNode] = {}
        self.anchors: dict[str, ClusterAnchor] = {}
        self.viewport = viewport or Viewport()
        self.overview_on = False
        self.sort_active = False
        self._saved_viewport: Viewport | None = None
        self._next_ordinal = 0

    # -- node management ---------------------------------------------------

    def add_node(self, node_id: str, radius: float, opacity: float) -> LayoutNode:
        if node_id in self.nodes:
            raise ValueError(f"duplicate node id {node_id!r}")
        if radius <= 0:
            raise ValueError("radius must be positive")
        node = LayoutNode(node_id=node_id, ordinal=self._next_ordinal, radius=radius, opacity=opacity)
        rng = self._node_rng(node.ordinal)
        rng.next_u64()  # reserve x draw
        rng.next_u64()  # reserve y draw
        node.float_phase = rng.uniform(0.0, 2.0 * math.pi)
        self._next_ordinal += 1
        self.nodes[node_id] = node
        return node

    def remove_node(self, node_id: str) -> None:
        node = self.nodes.pop(node_id)
        for cid in sorted(node.cluster_memberships):
            anchor = self.anchors.get(cid)
            if anchor and node_id in anchor.member_ids:
                anchor.member_ids = tuple(m for m in anchor.member_ids if m != node_id)

    def _node_rng(self, ordinal: int) -> SplitMix64:
        return SplitMix64(self.cfg.seed ^ ordinal)

    # -- initial placement ---------------------------------------------------

    def init_layout(self, bounds: tuple[float, float, float, float] | None = None) -> None:
        """Scatter nodes uniformly over ``bounds``, then run collision-only
        relaxation so no two balloons start overlapping."""
        ids = list(self.nodes)
        if not ids:
            return
        if bounds is None:
            bounds = self.default_bounds()
        x0, y0, x1, y1 = bounds
        if not (x1 > x0 and y1 > y0):
            raise ValueError("bounds must be a non-degenerate rectangle")
        for nid in ids:
            node = self.nodes[nid]
            rng = self._node_rng(node.ordinal)
            node.x = rng.uniform(x0, x1)
            node.y = rng.uniform(y0, y1)
            node.float_phase = rng.uniform(0.0, 2.0 * math.pi)
            node.vx = node.vy = 0.0
        self.relax_collisions(self.cfg.init_relax_steps)

    def default_bounds(self) -> tuple[float, float, float, float]:
        side = max(
            2.0 * self.cfg.sort_cell(),
            1.1 * self.cfg.sort_cell() * math.ceil(math.sqrt(len(self.nodes))),
        )
        return (-side / 2.0, -side / 2.0, side / 2.0, side / 2.0)

    def relax_collisions(self, max_steps: int) -> None:
        for _ in range(max_steps):
            if self._collision_pass() < 1e-12:
                break

    # -- tick ----------------------------------------------------------------

    def step(self) -> None:
        cfg = self.cfg
        t = self.tick * cfg.dt
        amp = cfg.float_amplitude
        omega = cfg.float_omega
        k = cfg.cluster_stiffness
        for node in self.nodes.values():
            if not node.movable():
                node.vx = node.vy = 0.0
                continue
            ax = amp * math.sin(omega * t + node.float_phase)
            ay = amp * math.cos(omega * t + 1.3 * node.float_phase)
            vx = node.vx + ax * cfg.dt
            vy = node.vy + ay * cfg.dt
            for cid in sorted(node.cluster_memberships):
                anchor = self.anchors.get(cid)
                if anchor is None:
                    continue
                vx += k * (anchor.x - node.x)
                vy += k * (anchor.y - node.y)
            node.vx = vx * cfg.damping
            node.vy = vy * cfg.damping
            node.x += node.vx * cfg.dt
            node.y += node.vy * cfg.dt
        for _ in range(cfg.collision_iterations):
            self._collision_pass()
        self.tick += 1

    # -- collision -----------------------------------------------------------

    def _active_nodes(self) -> list[LayoutNode]:
        return [n for n in self.nodes.values() if not n.hidden]

    def _collision_pass(self) -> float:
        """One Gauss-Seidel separation pass; returns the largest correction."""
        active = self._active_nodes()
        if len(active) < 2:
            return 0.0
        cell = 2.0 * max(n.radius for n in active)
        grid: dict[tuple[int, int], list[LayoutNode]] = {}
        for node in active:
            key = (math.floor(node.x / cell), math.floor(node.y / cell))
            grid.setdefault(key, []).append(node)
        pairs: list[tuple[int, int, LayoutNode, LayoutNode]] = []
        for node in active:
            cx = math.floor(node.x / cell)
            cy = math.floor(node.y / cell)
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    for other in grid.get((cx + dx, cy + dy), ()):
                        if other.ordinal > node.ordinal:
                            pairs.append((node.ordinal, other.ordinal, node, other))
        pairs.sort(key=lambda p: (p[0], p[1]))
        strength = self.cfg.collision_strength
        max_corr = 0.0
        for _, _, a, b in pairs:
            dx = b.x - a.x
            dy = b.y - a.y
            rsum = a.radius + b.radius
            d2 = dx * dx + dy * dy
            if d2 >= rsum * rsum:
                continue
            d = math.sqrt(d2)
            if d > 0.0:
                nx, ny = dx / d, dy / d
            else:
                nx, ny = 1.0, 0.0  # coincident centres: split along x
            push = strength * (rsum - d)
            a_mov = a.movable()
            b_mov = b.movable()
            if a_mov and b_mov:
                half = push / 2.0
                a.x -= nx * half
                a.y -= ny * half
                b.x += nx * half
                b.y += ny * half
            elif a_mov:
                a.x -= nx * push
                a.y -= ny * push
            elif b_mov:
                b.x += nx * push
                b.y += ny * push
            else:
                continue
            if push > max_corr:
                max_corr = push
        return max_corr

    def max_overlap_ratio(self) -> float:
        """Worst pairwise overlap among visible nodes, relative to the smaller
        radius. Brute force; intended for tests and diagnostics."""
        active = self._active_nodes()
        worst = 0.0
        for i, a in enumerate(active):
            for b in active[i + 1 :]:
                d = math.hypot(b.x - a.x, b.y - a.y)
                overlap = a.radius + b.radius - d
                if overlap > 0:
                    worst = max(worst, overlap / min(a.radius, b.radius))
        return worst

    # -- clusters ------------------------------------------------------------

    def apply_cluster(self, anchor_type: str, key: str, member_ids: Sequence[str]) -> ClusterAnchor:
        if anchor_type not in ANCHOR_TYPES:
            raise ValueError(f"unknown anchor type {anchor_type!r}")
        if not member_ids:
            raise ValueError("cluster has no members")
        cluster_id = f"{anchor_type}:{key}"
        if cluster_id in self.anchors:
            raise ValueError(f"cluster {cluster_id!r} already exists")
        members = []
        for mid in member_ids:
            if mid not in self.nodes:
                raise ValueError(f"unknown node {mid!r}")
            members.append(mid)
        cx = sum(self.nodes[m].x for m in members) / len(members)
        cy = sum(self.nodes[m].y for m in members) / len(members)
        anchor = ClusterAnchor(cluster_id, anchor_type, key, cx, cy, tuple(members))
        self.anchors[cluster_id] = anchor
        for mid in members:
            self.nodes[mid].cluster_memberships.add(cluster_id)
        return anchor

    def remove_cluster(self, cluster_id: str) -> None:
        anchor = self.anchors.pop(cluster_id, None)
        if anchor is None:
            raise ValueError(f"unknown cluster {cluster_id!r}")
        for mid in anchor.member_ids:
            node = self.nodes.get(mid)
            if node:
                node.cluster_memberships.discard(cluster_id)

    # -- sorted grid -----------------------------------------------------------

    def arrange_grid(self, node_ids: Sequence[str]) -> None:
        """Freeze ``node_ids`` onto a grid over the current viewport, filling
        rows left to right, overflowing downward past the viewport if needed."""
        cell = self.cfg.sort_cell()
        x0, y0, x1, _ = self.viewport.world_rect()
        columns = max(1, math.floor((x1 - x0) / cell))
        for k, nid in enumerate(node_ids):
            row, col = divmod(k, columns)
            node = self.nodes[nid]
            node.x = x0 + (col + 0.5) * cell
            node.y = y0 + (row + 0.5) * cell
            node.vx = node.vy = 0.0
            node.sorted_frozen = True
        self.sort_active = True

    def clear_grid(self) -> None:
        for node in self.nodes.values():
            node.sorted_frozen = False
        self.sort_active = False

    def grid_cell_center(self, k: int) -> tuple[float, float]:
        cell = self.cfg.sort_cell()
        x0, y0, x1, _ = self.viewport.world_rect()
        columns = max(1, math.floor((x1 - x0) / cell))
        row, col = divmod(k, columns)
        return (x0 + (col + 0.5) * cell, y0 + (row + 0.5) * cell)

    # -- overview --------------------------------------------------------------

    def enter_overview(self) -> None:
        """Zoom out so every visible balloon fits the viewport (10% margin)."""
        if self.overview_on:
            return
        self._saved_viewport = replace(self.viewport)
        visible = [n for n in self.nodes.values() if not n.hidden]
        if visible:
            xs = [n.x for n in visible]
            ys = [n.y for n in visible]
            bw = max(xs) - min(xs)
            bh = max(ys) - min(ys)
            zooms = []
            if bw > 0:
                zooms.append(self.viewport.width / (bw * 1.1))
            if bh > 0:
                zooms.append(self.viewport.height / (bh * 1.1))
            if zooms:
                self.viewport.zoom = min(zooms)
            self.viewport.cx = (max(xs) + min(xs)) / 2.0
            self.viewport.cy = (max(ys) + min(ys)) / 2.0
        self.overview_on = True

    def leave_overview(self) -> None:
        if not self.overview_on:
            return
        if self._saved_viewport is not None:
            self.viewport = self._saved_viewport
            self._saved_viewport = None
        self.overview_on = False

    # -- minimap ----------------------------------------------------------------

    def minimap_view(self, mm_width: float = 200.0, mm_height: float = 150.0) -> dict:
        """Zoomed-out dot positions plus the current-view box, in minimap units."""
        vx0, vy0, vx1, vy1 = self.viewport.world_rect()
        visible = [n for n in self.nodes.values() if not n.hidden]
        ex0, ey0, ex1, ey1 = vx0, vy0, vx1, vy1
        if visible:
            ex0 = min(ex0, min(n.x for n in visible))
            ey0 = min(ey0, min(n.y for n in visible))
            ex1 = max(ex1, max(n.x for n in visible))
            ey1 = max(ey1, max(n.y for n in visible))
        ew = ex1 - ex0 or 1.0
        eh = ey1 - ey0 or 1.0
        scale = min(mm_width / ew, mm_height / eh)
        return {
            "width": mm_width,
            "height": mm_height,
            "scale": scale,
            "extent": [ex0, ey0, ex1, ey1],
            "dots": [
                {"id": n.node_id, "x": (n.x - ex0) * scale, "y": (n.y - ey0) * scale}
                for n in visible
            ],
            "view": [
                (vx0 - ex0) * scale,
                (vy0 - ey0) * scale,
                (vx1 - ex0) * scale,
                (vy1 - ey0) * scale,
            ],
        }

    # -- frames -----------------------------------------------------------------

    @property
    def mode(self) -> str:
        if self.overview_on:
            return "overview"
        if self.sort_active:
            return "sorted"
        return "detail"

    def frame(self) -> dict:
        return {
            "tick": self.tick,
            "mode": self.mode,
            "viewport": {
                "cx": self.viewport.cx,
                "cy": self.viewport.cy,
                "zoom": self.viewport.zoom,
                "w": self.viewport.width,
                "h": self.viewport.height,
            },
            "nodes": [
                {
                    "id": n.node_id,
                    "x": n.x,
                    "y": n.y,
                    "r": n.radius,
                    "o": n.opacity,
                    "hidden": n.hidden,
                }
                for n in self.nodes.values()
            ],
            "anchors": [
                {"id": a.cluster_id, "type": a.anchor_type, "key": a.key, "x": a.x, "y": a.y}
                for a in self.anchors.values()
            ],
        }


def run_until_converged(sim: Simulation, max_ticks: int = 5000) -> int:
    """Tick until the largest per-tick displacement drops below epsilon.

    Returns the number of ticks run. Raises if the budget is exhausted.
    """
    eps = sim.cfg.epsilon
    for i in range(max_ticks):
        before = {nid: (n.x, n.y) for nid, n in sim.nodes.items()}
        sim.step()
        moved = 0.0
        for nid, (px, py) in before.items():
            n = sim.nodes[nid]
            moved = max(moved, math.hypot(n.x - px, n.y - py))
        if moved < eps:
            return i + 1
    raise RuntimeError(f"no convergence within {max_ticks} ticks")
