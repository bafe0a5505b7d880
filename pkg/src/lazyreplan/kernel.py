"""Incremental repair core shared by every planner in the package.

One kernel maintains the g/rhs labels, backpointers, and the repair queue of a
single search tree. Direction is parametric: stationary planners grow the tree
forward from the start (rhs scans in-edges, keys use distance-to-goal), moving
planners grow it backward from the goal (rhs scans out-edges, keys use
distance-to-agent plus the km drift term) so the root never moves while the
agent does.

Keys are (min(g, rhs) + h + km, min(g, rhs)) compared lexicographically; equal
keys pop the smallest vertex id. A vertex is expanded when its pop is actually
processed; stale pops (moving planners re-keying after the agent moved) are
reinserted and not counted.

The truncation rules of the bounded variants run inside repair(): rule 1 ends
the pass early once the tracked path to the target is within eps2 of the best
possible, rule 2 freezes an underconsistent vertex whose current path is
already good enough instead of propagating its repair. Frozen vertices carry a
snapshot of their path taken at truncation time; obtain_path splices those
snapshots back in.
"""

import math

from .errors import InvariantViolation, UsageError
from .pqueue import RepairQueue

INF = float("inf")


class Event:
    """Repair interrupt: 'shortest' stops only at the search target, depth-k
    stops at any vertex with at least k unevaluated edges on its path."""

    __slots__ = ("kind", "alpha")

    def __init__(self, kind="shortest", alpha=None):
        if kind not in ("shortest", "depth"):
            raise UsageError(f"unknown event kind {kind!r}")
        if kind == "depth":
            if not isinstance(alpha, int) or isinstance(alpha, bool) or alpha < 1:
                raise UsageError(f"depth events need an integer alpha >= 1, got {alpha!r}")
        self.kind = kind
        self.alpha = alpha

    @classmethod
    def from_config(cls, spec):
        """Accepts 'shortest' or an integer lookahead depth."""
        if spec == "shortest" or spec is None:
            return cls("shortest")
        if isinstance(spec, int) and not isinstance(spec, bool):
            return cls("depth", spec)
        raise UsageError(f"event must be 'shortest' or an integer depth, got {spec!r}")


class SearchKernel:
    def __init__(self, graph, weights, root, anchor, hfun, *, reverse=False,
                 moving=False, eager=False, truncating=False, eps2=1.0,
                 strict_rule2=False, debug=False):
        n = graph.num_vertices
        if not (0 <= root < n) or not (0 <= anchor < n):
            raise UsageError("root and anchor must be existing vertices")
        if eps2 < 1.0 or math.isnan(eps2) or math.isinf(eps2):
            raise UsageError(f"eps2 must be a finite number >= 1, got {eps2!r}")
        self.graph = graph
        self.weights = weights
        self.root = root
        self.anchor = anchor
        self.hfun = hfun
        self.reverse = reverse
        self.moving = moving
        self.eager = eager
        self.truncating = truncating
        self.eps2 = float(eps2)
        self.strict_rule2 = strict_rule2
        self.debug = debug

        self.g = [INF] * n
        self.rhs = [INF] * n
        self.bp = [None] * n
        self.bp_eid = [None] * n
        self.gpi = [INF] * n
        self.truncated = set()
        self.frozen = {}
        self.queue = RepairQueue()
        self.km = 0.0

        self.expansions = 0
        self.stale_reinserts = 0
        self.truncations = 0
        self.rule1_returns = 0
        self.depth_overshoots = 0
        self.max_pops_per_vertex = 0

        self.rhs[root] = 0.0
        self.queue.insert(root, self.calculate_key(root))

    # -- keys ---------------------------------------------------------------

    def _h(self, v):
        return self.hfun(v, self.anchor)

    def calculate_key(self, v, h_value=None, km=None):
        g = self.g[v]
        r = self.rhs[v]
        m = g if g < r else r
        if h_value is None:
            h_value = self._h(v)
        if km is None:
            km = self.km
        return (m + h_value + km, m)

    def set_eps2(self, eps2):
        if eps2 < 1.0 or math.isnan(eps2) or math.isinf(eps2):
            raise UsageError(f"eps2 must be a finite number >= 1, got {eps2!r}")
        self.eps2 = float(eps2)

    # -- label maintenance --------------------------------------------------

    def _parent_items(self, v):
        """Edges the rhs of v minimizes over, as (parent, eid) pairs."""
        if self.reverse:
            return self.graph.succ_items(v)
        return self.graph.pred_items(v)

    def _children(self, u):
        """Vertices whose rhs depends on g(u)."""
        if self.reverse:
            return self.graph.pred_items(u)
        return self.graph.succ_items(u)

    def update_vertex(self, v):
        if v != self.root:
            w = self.weights
            ev = w._eval
            truth = w.truth
            est = w.estimate
            infl = w.inflation
            eager = self.eager
            g = self.g
            best = INF
            bu = None
            be = None
            for u, eid in self._parent_items(v):
                if eager and not ev[eid]:
                    w.evaluate(eid)
                gu = g[u]
                if gu == INF:
                    continue
                c = gu + (truth[eid] if ev[eid] else infl * est[eid])
                if c < best:
                    best = c
                    bu = u
                    be = eid
            self.rhs[v] = best
            self.bp[v] = bu
            self.bp_eid[v] = be
        inq = v in self.queue
        if self.g[v] != self.rhs[v] and v not in self.truncated:
            key = self.calculate_key(v)
            if inq:
                self.queue.update(v, key)
            else:
                self.queue.insert(v, key)
        elif inq:
            self.queue.remove(v)

    def ensure_size(self):
        """Grow the label arrays after vertices were added to the graph."""
        n = self.graph.num_vertices
        add = n - len(self.g)
        if add <= 0:
            return
        self.g.extend([INF] * add)
        self.rhs.extend([INF] * add)
        self.bp.extend([None] * add)
        self.bp_eid.extend([None] * add)
        self.gpi.extend([INF] * add)

    def refresh_all(self):
        """Recompute every rhs and requeue; needed after inflation changes."""
        for v in range(self.graph.num_vertices):
            if v != self.root:
                self.update_vertex(v)

    # -- paths --------------------------------------------------------------

    def compute_gpi(self, v):
        """Lazy cost of the certified path of v; +inf when the chain is
        broken or cyclic. Must price exactly the path obtain_path returns,
        so a truncated vertex contributes its frozen snapshot, not its live
        backpointer chain (update_vertex may rewire bp under a frozen
        vertex, and a certificate priced off the live chain would no longer
        cover the spliced path handed back). Cached in self.gpi."""
        w = self.weights
        if v in self.truncated:
            val = math.fsum(w.lazy(e) for e in self.frozen[v][1])
            self.gpi[v] = val
            return val
        parts = []
        cur = v
        root = self.root
        seen = {v}
        while cur != root:
            p = self.bp[cur]
            if p is None:
                self.gpi[v] = INF
                return INF
            parts.append(w.lazy(self.bp_eid[cur]))
            if p in self.truncated:
                parts.extend(w.lazy(e) for e in self.frozen[p][1])
                break
            if p in seen:
                self.gpi[v] = INF
                return INF
            seen.add(p)
            cur = p
        val = math.fsum(parts)
        self.gpi[v] = val
        return val

    def _walk_path(self, v):
        """Backpointer chain of v as (vertices, edge ids), root first. Hitting
        a truncated ancestor splices in its frozen snapshot."""
        verts = [v]
        eids = []
        cur = v
        root = self.root
        seen = {v}
        while cur != root:
            p = self.bp[cur]
            if p is None:
                raise InvariantViolation(f"broken backpointer chain at vertex {cur}")
            eids.append(self.bp_eid[cur])
            if p in self.truncated:
                fverts, feids = self.frozen[p]
                verts.reverse()
                eids.reverse()
                return fverts + verts, feids + eids
            if p in seen:
                raise InvariantViolation(f"backpointer cycle at vertex {p}")
            seen.add(p)
            verts.append(p)
            cur = p
        verts.reverse()
        eids.reverse()
        return verts, eids

    def obtain_path(self, v):
        """Certified path for v, root first; a truncated vertex keeps the
        snapshot frozen at its truncation."""
        if v in self.truncated:
            fverts, feids = self.frozen[v]
            return list(fverts), list(feids)
        return self._walk_path(v)

    # -- events -------------------------------------------------------------

    def _event_fires(self, event, u, target):
        if u == target:
            return True
        if event.kind == "shortest":
            return False
        ev = self.weights._eval
        count = 0
        cur = u
        root = self.root
        seen = {u}
        while cur != root:
            p = self.bp[cur]
            if p is None or p in seen:
                return False  # unverifiable chain: let the repair continue
            if not ev[self.bp_eid[cur]]:
                count += 1
            if p in self.truncated:
                for e in self.frozen[p][1]:
                    if not ev[e]:
                        count += 1
                break
            seen.add(p)
            cur = p
        if count >= event.alpha:
            if count > event.alpha:
                self.depth_overshoots += 1
            return True
        return False

    # -- repair loop --------------------------------------------------------

    def repair(self, event=None):
        """Run the repair loop until the target is settled, the event fires,
        or a truncation rule ends the pass. Returns the certified (vertices,
        edge ids) path root-first, or None when no finite path exists."""
        if event is None:
            event = Event()
        q = self.queue
        g = self.g
        rhs = self.rhs
        target = self.anchor
        pops = {}
        last_key = None
        while True:
            if target in self.truncated:
                return self.obtain_path(target)
            tk = q.top_key()
            kt = self.calculate_key(target)
            if g[target] == rhs[target]:
                # Keys tied with the target's must still be processed: sums
                # associate differently along different parents, so a true
                # tie can sit one ulp above kt and the plain tk < kt stop
                # would strand a dirty vertex on the target's backpointer
                # chain. Stop only once the top clears a ulp-scale band.
                if kt[0] == INF:
                    if not tk < kt:
                        break
                else:
                    slack = 1e-12 * max(1.0, kt[0])
                    if tk[0] > kt[0] + slack or (tk[0] >= kt[0] - slack
                                                 and tk[1] > kt[1] + slack):
                        break
            if not len(q):
                raise InvariantViolation("repair queue drained with the target unsettled")
            key, u = q.pop()
            # Mathematically tied k1 sums associate differently along
            # different parents and can split by one ulp, flipping the
            # (k2, id) tie order the two-pop bound relies on. Entries in
            # the ulp band of the popped key are re-ranked the exact way.
            tol = 1e-12 * max(1.0, key[0]) if key[0] < INF else 0.0
            if len(q) and q.top_key()[0] <= key[0] + tol:
                band = [(key, u)]
                while len(q) and q.top_key()[0] <= key[0] + tol:
                    band.append(q.pop())
                band.sort(key=lambda kv: (kv[0][1], kv[1]))
                key, u = band[0]
                for bkey, bv in band[1:]:
                    q.insert(bv, bkey)
            if self.moving:
                ku = self.calculate_key(u)
                if key < ku:
                    q.insert(u, ku)
                    self.stale_reinserts += 1
                    continue
            gu = g[u]
            ru = rhs[u]
            if self.truncating:
                hu = self._h(u)
                floor = gu if gu < ru else ru
                if self.compute_gpi(target) <= self.eps2 * (floor + hu):
                    # Terminal check, not an expansion; put u back so the
                    # queue still holds exactly the inconsistent vertices.
                    q.insert(u, key)
                    self.rule1_returns += 1
                    return self.obtain_path(target)
            self.expansions += 1
            c = pops.get(u, 0) + 1
            pops[u] = c
            if c > self.max_pops_per_vertex:
                self.max_pops_per_vertex = c
            if c > 2:
                raise InvariantViolation(
                    f"vertex {u} processed {c} times in one repair pass")
            if self.debug:
                # Key sums associate differently along different parents, so
                # allow ulp-scale noise before calling the order broken.
                if last_key is not None:
                    tol = 1e-9 * max(1.0, abs(last_key[0]))
                    dropped_k1 = key[0] < last_key[0] - tol
                    exact_tie = key[0] == last_key[0]
                    if dropped_k1 or (exact_tie and key[1] < last_key[1] - tol):
                        raise InvariantViolation(
                            "popped keys decreased within a repair pass")
                last_key = key
            if gu > ru:
                g[u] = ru
                # Children first, event second: an event return must leave a
                # live frontier behind u or the resumed search dead-ends.
                for v, _ in self._children(u):
                    self.update_vertex(v)
                if self._event_fires(event, u, target):
                    return self.obtain_path(u)
            else:
                if self.truncating:
                    gpi_u = self.compute_gpi(u)
                    floor = gu if self.strict_rule2 else (gu if gu < ru else ru)
                    if gpi_u + hu <= self.eps2 * (floor + hu):
                        self.truncations += 1
                        self.frozen[u] = self._walk_path(u)
                        self.truncated.add(u)
                        continue
                g[u] = INF
                self.update_vertex(u)
                for v, _ in self._children(u):
                    self.update_vertex(v)
        if rhs[target] == INF:
            return None
        return self.obtain_path(target)

    def clear_truncated(self):
        """Unfreeze every truncated vertex and requeue the still-inconsistent
        ones. Returns the cleared ids."""
        if not self.truncated:
            return []
        cleared = sorted(self.truncated)
        self.truncated.clear()
        self.frozen.clear()
        for v in cleared:
            self.gpi[v] = INF
            self.update_vertex(v)
        return cleared

    # -- diagnostics --------------------------------------------------------

    def scan_queue_invariant(self):
        """Symmetric difference between the queue and the set it must equal:
        {v : g(v) != rhs(v) and v not truncated}. 0 means clean."""
        want = set()
        for v in range(self.graph.num_vertices):
            if self.g[v] != self.rhs[v] and v not in self.truncated:
                want.add(v)
        have = {vid for vid, _ in self.queue.items()}
        return len(want ^ have)
