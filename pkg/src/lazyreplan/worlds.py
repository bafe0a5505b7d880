"""Deterministic synthetic worlds: grid graphs and sampled roadmaps with
scripted weight changes and roadmap densification.

Every edge's estimate is its Euclidean length; the true weight is the length
when the segment is free and +inf when it crosses an obstacle (fraction
scripts instead rescale lengths by factors >= 1). Estimates therefore never
exceed true weights, and straight-line heuristics between vertices are
consistent by construction.

Two change models:
  * obstacle scenes: a list of shape sets; each epoch activates one scene
    (cycling by default), the change batch is the diff of the truth arrays.
  * fraction rescale: each epoch redraws floor(fraction * pairs) undirected
    edge weights as length * U[1, 3], cumulative over epochs.

All randomness flows from named random.Random streams derived from the world
seed, so rebuilds are byte-identical; the sampler's rejection stream and the
densification stream persist on the world object, which makes growth
deterministic too.
"""

import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from random import Random

from .errors import UsageError
from .graph import ChangeBatch, Graph, LazyWeights

INF = float("inf")

Shape = Tuple  # ("rect", x0, y0, x1, y1) or ("circle", cx, cy, r)


# -- geometry ---------------------------------------------------------------

def point_in_shape(x, y, shape) -> bool:
    if shape[0] == "rect":
        _, x0, y0, x1, y1 = shape
        return x0 <= x <= x1 and y0 <= y <= y1
    if shape[0] == "circle":
        _, cx, cy, r = shape
        return (x - cx) ** 2 + (y - cy) ** 2 <= r * r
    raise UsageError(f"unknown shape {shape!r}")


def _seg_hits_rect(px, py, qx, qy, x0, y0, x1, y1) -> bool:
    # Liang-Barsky clip; touching the boundary counts as a hit.
    dx = qx - px
    dy = qy - py
    t0, t1 = 0.0, 1.0
    for p, q in ((-dx, px - x0), (dx, x1 - px), (-dy, py - y0), (dy, y1 - py)):
        if p == 0.0:
            if q < 0.0:
                return False
        else:
            t = q / p
            if p < 0.0:
                if t > t0:
                    t0 = t
            else:
                if t < t1:
                    t1 = t
            if t0 > t1:
                return False
    return True


def _seg_hits_circle(px, py, qx, qy, cx, cy, r) -> bool:
    dx = qx - px
    dy = qy - py
    fx = px - cx
    fy = py - cy
    seg2 = dx * dx + dy * dy
    if seg2 == 0.0:
        return fx * fx + fy * fy <= r * r
    t = -(fx * dx + fy * dy) / seg2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    gx = fx + t * dx
    gy = fy + t * dy
    return gx * gx + gy * gy <= r * r


def segment_blocked(p, q, shapes) -> bool:
    for s in shapes:
        if s[0] == "rect":
            if _seg_hits_rect(p[0], p[1], q[0], q[1], s[1], s[2], s[3], s[4]):
                return True
        elif s[0] == "circle":
            if _seg_hits_circle(p[0], p[1], q[0], q[1], s[1], s[2], s[3]):
                return True
        else:
            raise UsageError(f"unknown shape {s!r}")
    return False


def halton(index: int, base: int) -> float:
    """Radical-inverse low-discrepancy value for index >= 1."""
    f = 1.0
    r = 0.0
    i = index
    while i > 0:
        f /= base
        r += f * (i % base)
        i //= base
    return r


def densification_eps(q: int) -> Tuple[float, float]:
    """Suboptimality schedule tightening with the vertex count q."""
    return 1.0 + 5.0 / q, 1.0 + 10.0 / q


@dataclass
class GrowthUpdate:
    new_vertices: List[int]
    new_edges: List[int]
    estimate: List[float]
    truth: List[float]
    touched: List[int]   # vertices whose rhs may change (new + old heads)


class World:
    def __init__(self, kind: str, seed: int, params: dict, graph: Graph,
                 coords: List[Tuple[float, float]], estimate: List[float],
                 scenes: List[List[Shape]],
                 scene_for_epoch: Optional[List[int]] = None,
                 fraction: Optional[float] = None):
        self.kind = kind
        self.seed = seed
        self.params = params
        self.graph = graph
        self.coords = coords
        self.estimate = estimate
        self.scenes = scenes if scenes else [[]]
        self.scene_for_epoch = scene_for_epoch
        self.fraction = fraction
        self._scene_truth: Dict[int, List[float]] = {}
        self._epoch_truth: Dict[int, List[float]] = {}
        self._halton_next = params.get("halton_next", 1)
        self._densify_rng = Random(f"{seed}:densify")
        self._uniform_rng = Random(f"{seed}:samples")

    # -- basics ------------------------------------------------------------

    def h(self, u: int, v: int) -> float:
        a = self.coords[u]
        b = self.coords[v]
        return math.hypot(a[0] - b[0], a[1] - b[1])

    def scene_index(self, epoch: int) -> int:
        if self.scene_for_epoch is not None:
            if epoch >= len(self.scene_for_epoch):
                raise UsageError(f"epoch {epoch} beyond the scene script")
            return self.scene_for_epoch[epoch]
        return epoch % len(self.scenes)

    def _truth_for_scene(self, idx: int) -> List[float]:
        cached = self._scene_truth.get(idx)
        if cached is None:
            shapes = self.scenes[idx]
            cached = []
            for eid, u, v in self.graph.edges():
                if shapes and segment_blocked(self.coords[u], self.coords[v], shapes):
                    cached.append(INF)
                else:
                    cached.append(self.estimate[eid])
            self._scene_truth[idx] = cached
        return cached

    def truth_for_epoch(self, epoch: int) -> List[float]:
        """Full true-weight array of the given graph version."""
        if epoch < 0:
            raise UsageError("epochs start at 0")
        if self.fraction is None:
            return self._truth_for_scene(self.scene_index(epoch))
        cached = self._epoch_truth.get(epoch)
        if cached is None:
            if epoch == 0:
                cached = list(self._truth_for_scene(0))
            else:
                cached = list(self.truth_for_epoch(epoch - 1))
                for u, v, w in self.change_batch(epoch):
                    cached[self.graph.edge_id(u, v)] = w
            self._epoch_truth[epoch] = cached
        return cached

    def change_batch(self, epoch: int) -> ChangeBatch:
        """Directed (source, target, new weight) triples moving version
        epoch-1 to version epoch."""
        if epoch < 1:
            raise UsageError("change batches start at epoch 1")
        if self.fraction is not None:
            return self._fraction_batch(epoch)
        prev = self._truth_for_scene(self.scene_index(epoch - 1))
        cur = self._truth_for_scene(self.scene_index(epoch))
        batch = []
        for eid, u, v in self.graph.edges():
            if cur[eid] != prev[eid]:
                batch.append((u, v, cur[eid]))
        return batch

    def _undirected_pairs(self) -> List[Tuple[int, int]]:
        base = self._truth_for_scene(0)
        pairs = []
        for eid, u, v in self.graph.edges():
            if u < v and self.graph.has_edge(v, u) and base[eid] != INF:
                pairs.append((u, v))
        return pairs

    def _fraction_batch(self, epoch: int) -> ChangeBatch:
        pairs = self._undirected_pairs()
        count = int(self.fraction * len(pairs))   # rounds down
        if count == 0:
            return []
        rng = Random(f"{self.seed}:frac:{epoch}")
        chosen = rng.sample(pairs, count)
        batch = []
        for u, v in sorted(chosen):
            factor = rng.uniform(1.0, 3.0)
            w = self.estimate[self.graph.edge_id(u, v)] * factor
            batch.append((u, v, w))
            batch.append((v, u, w))
        return batch

    def make_weights(self, inflation: float = 1.0,
                     eval_delay_us: float = 0.0) -> LazyWeights:
        """Fresh lazy store at version 0 (each planner gets its own)."""
        return LazyWeights(self.graph, list(self.estimate),
                           list(self.truth_for_epoch(0)),
                           inflation=inflation, eval_delay_us=eval_delay_us)

    # -- densification -----------------------------------------------------

    def _sample_free(self, shapes) -> Tuple[float, float]:
        x0, y0, x1, y1 = self.params.get("bounds", (0.0, 0.0, 1.0, 1.0))
        sampler = self.params.get("sampler", "halton")
        for _ in range(100000):
            if sampler == "halton":
                i = self._halton_next
                self._halton_next += 1
                x = x0 + (x1 - x0) * halton(i, 2)
                y = y0 + (y1 - y0) * halton(i, 3)
            else:
                x = x0 + (x1 - x0) * self._uniform_rng.random()
                y = y0 + (y1 - y0) * self._uniform_rng.random()
            if not any(point_in_shape(x, y, s) for s in shapes):
                return (x, y)
        raise UsageError("sampler rejected 100000 points; obstacles cover the bounds")

    def _knn_targets(self, x, y, k) -> List[int]:
        pts = np.asarray(self.coords)
        d = np.sqrt((pts[:, 0] - x) ** 2 + (pts[:, 1] - y) ** 2)
        order = np.lexsort((np.arange(len(d)), d))
        out = []
        for j in order:
            if d[j] > 0.0:
                out.append(int(j))
                if len(out) == k:
                    break
        return out

    def densify(self, batch_size: int) -> GrowthUpdate:
        """Add batch_size free samples, wiring each to its k nearest existing
        vertices (both directions). Static-scene worlds only."""
        if self.kind != "roadmap":
            raise UsageError("densification applies to roadmap worlds")
        if len(self.scenes) != 1 or self.fraction is not None:
            raise UsageError("densification needs a static world")
        k = self.params["k"]
        shapes = self.scenes[0]
        truth0 = self._truth_for_scene(0)
        new_vids = []
        new_eids = []
        new_est = []
        new_tru = []
        touched = set()
        for _ in range(batch_size):
            x, y = self._sample_free(shapes)
            vid = self.graph.add_vertex()
            self.coords.append((x, y))
            new_vids.append(vid)
            touched.add(vid)
            for j in self._knn_targets(x, y, k):
                w = self.h(vid, j)
                blocked = segment_blocked(self.coords[vid], self.coords[j], shapes)
                for (a, b) in ((vid, j), (j, vid)):
                    if self.graph.has_edge(a, b):
                        continue
                    eid = self.graph.add_edge(a, b)
                    self.estimate.append(w)
                    truth0.append(INF if blocked else w)
                    new_eids.append(eid)
                    new_est.append(w)
                    new_tru.append(INF if blocked else w)
                    touched.add(b)
        return GrowthUpdate(new_vids, new_eids, new_est, new_tru,
                            sorted(touched))

    # -- audits ------------------------------------------------------------

    def audit_admissible(self, epoch: int = 0) -> int:
        """Estimate/truth violations at a version; 0 means clean."""
        truth = self.truth_for_epoch(epoch)
        bad = 0
        for eid in range(self.graph.num_edges):
            est = self.estimate[eid]
            if not (0.0 < est < INF) or not est <= truth[eid] or not truth[eid] > 0:
                bad += 1
        return bad

    def audit_consistent(self, tol: float = 1e-9) -> int:
        """Triangle-inequality check of the straight-line heuristic against
        the estimates, every vertex as anchor; counts violations."""
        pts = np.asarray(self.coords)
        ends = np.asarray([(u, v) for _, u, v in self.graph.edges()], dtype=int)
        est = np.asarray(self.estimate)
        if len(ends) == 0:
            return 0
        bad = 0
        for a in range(len(pts)):
            d = np.sqrt(((pts - pts[a]) ** 2).sum(axis=1))
            gap = np.abs(d[ends[:, 0]] - d[ends[:, 1]])
            bad += int((gap > est + tol).sum())
        return bad

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "params": {k: v for k, v in sorted(self.params.items())},
            "coords": [[x, y] for x, y in self.coords],
            "edges": [[u, v] for _, u, v in self.graph.edges()],
            "estimate": list(self.estimate),
            "scenes": [[list(s) for s in scene] for scene in self.scenes],
            "scene_for_epoch": self.scene_for_epoch,
            "fraction": self.fraction,
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


# -- builders ---------------------------------------------------------------

def build_grid(rows: int, cols: int, connectivity: int = 8,
               scenes: Optional[List[List[Shape]]] = None,
               scene_for_epoch: Optional[List[int]] = None,
               fraction: Optional[float] = None, seed: int = 0) -> World:
    """Unit-spaced grid, vertex id = row * cols + col, coords (col, row).

    4-connectivity gives axis moves, 8 adds diagonals; both directions of
    every edge are present and weighted by Euclidean length.
    """
    if rows < 1 or cols < 1:
        raise UsageError("grid needs at least one row and column")
    if connectivity not in (4, 8):
        raise UsageError(f"connectivity must be 4 or 8, got {connectivity}")
    g = Graph()
    g.add_vertices(rows * cols)
    coords = [(float(c), float(r)) for r in range(rows) for c in range(cols)]
    offsets = [(0, 1), (0, -1), (1, 0), (-1, 0)]
    if connectivity == 8:
        offsets += [(1, 1), (1, -1), (-1, 1), (-1, -1)]
    est = []
    for r in range(rows):
        for c in range(cols):
            u = r * cols + c
            for dr, dc in offsets:
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    g.add_edge(u, rr * cols + cc)
                    est.append(math.hypot(dr, dc))
    params = {"rows": rows, "cols": cols, "connectivity": connectivity}
    return World("grid", seed, params, g, coords, est,
                 scenes or [[]], scene_for_epoch, fraction)


def build_roadmap(n: int, k: int, sampler: str = "halton", seed: int = 0,
                  scene: Optional[List[Shape]] = None,
                  fraction: Optional[float] = None,
                  bounds: Tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)) -> World:
    """n free samples in bounds wired to their k nearest neighbors.

    Halton sampling uses bases (2, 3) starting at index 1; uniform sampling
    draws from a seeded stream. Samples inside obstacles are rejected. Each
    vertex proposes edges to its k nearest (ties by id); both directions are
    added, so degrees can exceed k.
    """
    if n < 2:
        raise UsageError("roadmap needs at least two samples")
    if k < 1 or k >= n:
        raise UsageError("k must satisfy 1 <= k < n")
    if sampler not in ("halton", "uniform"):
        raise UsageError(f"unknown sampler {sampler!r}")
    shapes = scene or []
    params = {"n": n, "k": k, "sampler": sampler,
              "bounds": tuple(float(b) for b in bounds)}
    g = Graph()
    g.add_vertices(n)
    world = World("roadmap", seed, params, g, [], [],
                  [shapes], None, fraction)
    coords = []
    for _ in range(n):
        coords.append(world._sample_free(shapes))
    world.coords = coords
    params["halton_next"] = world._halton_next
    pts = np.asarray(coords)
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    dist = np.sqrt(d2)
    ids = np.arange(n)
    est = world.estimate
    for i in range(n):
        order = np.lexsort((ids, dist[i]))
        added = 0
        for j in order:
            j = int(j)
            if j == i or dist[i][j] == 0.0:
                continue
            w = world.h(i, j)
            blocked = shapes and segment_blocked(coords[i], coords[j], shapes)
            for (a, b) in ((i, j), (j, i)):
                if not g.has_edge(a, b):
                    g.add_edge(a, b)
                    est.append(w)
            added += 1
            if added == k:
                break
    return world


def build_world(spec: dict, seed: int) -> World:
    """Scenario world description to World."""
    kind = spec.get("kind")
    scenes = spec.get("scenes")
    if scenes is not None:
        scenes = [[tuple(s) for s in scene] for scene in scenes]
    if kind == "grid":
        return build_grid(spec["rows"], spec["cols"],
                          connectivity=spec.get("connectivity", 8),
                          scenes=scenes,
                          scene_for_epoch=spec.get("scene_for_epoch"),
                          fraction=spec.get("fraction"), seed=seed)
    if kind == "roadmap":
        scene = spec.get("scene")
        if scene is not None:
            scene = [tuple(s) for s in scene]
        return build_roadmap(spec["n"], spec["k"],
                             sampler=spec.get("sampler", "halton"),
                             seed=seed, scene=scene,
                             fraction=spec.get("fraction"),
                             bounds=tuple(spec.get("bounds", (0.0, 0.0, 1.0, 1.0))))
    raise UsageError(f"unknown world kind {kind!r}")


def make_obstacle_scenes(seed: int, rows: int, cols: int, n_scenes: int = 3,
                         n_obstacles: int = 3) -> List[List[Shape]]:
    """Seeded rectangular obstacle scenes for grid scripts; obstacles stay
    away from the corner cells so start/goal corners are never swallowed."""
    rng = Random(f"{seed}:scenes")
    scenes = []
    for _ in range(n_scenes):
        shapes = []
        for _ in range(n_obstacles):
            w = rng.uniform(1.0, max(1.5, cols / 4))
            h = rng.uniform(1.0, max(1.5, rows / 4))
            x0 = rng.uniform(1.0, max(1.01, cols - 2 - w))
            y0 = rng.uniform(1.0, max(1.01, rows - 2 - h))
            shapes.append(("rect", x0, y0, x0 + w, y0 + h))
        scenes.append(shapes)
    return scenes
