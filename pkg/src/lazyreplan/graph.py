"""Directed graph topology and the lazy edge-weight store.

Vertices are dense ints starting at 0. Edges are directed, no self loops, no
parallel edges; symmetric worlds add both directions explicitly. Each edge has
a dense integer id assigned in insertion order; adjacency lists are kept in
ascending neighbor-id order so every scan is deterministic.

The weight store keeps two values per edge: a finite positive estimate w_hat
(cheap, known up front) and the true weight w (positive or +inf, expensive to
look up). Until an edge is evaluated its reported weight is inflation * w_hat;
after evaluation it is w. Applying a change batch reverts the touched edges to
the unevaluated state so the new true value must be re-discovered.
"""

import math
import time
from bisect import insort
from typing import Iterable, List, Sequence, Tuple

from .errors import UsageError

INF = float("inf")

# (source, target, new_true_weight) triples
ChangeBatch = List[Tuple[int, int, float]]


class Graph:
    """Adjacency-list digraph with dense vertex and edge ids."""

    __slots__ = ("_succ", "_pred", "_ends", "_eid")

    def __init__(self):
        self._succ = []   # vid -> sorted list of (neighbor, eid) for out-edges
        self._pred = []   # vid -> sorted list of (neighbor, eid) for in-edges
        self._ends = []   # eid -> (source, target)
        self._eid = {}    # (source, target) -> eid

    @property
    def num_vertices(self):
        return len(self._succ)

    @property
    def num_edges(self):
        return len(self._ends)

    def add_vertex(self) -> int:
        self._succ.append([])
        self._pred.append([])
        return len(self._succ) - 1

    def add_vertices(self, count: int) -> range:
        start = len(self._succ)
        for _ in range(count):
            self._succ.append([])
            self._pred.append([])
        return range(start, len(self._succ))

    def add_edge(self, u: int, v: int) -> int:
        n = len(self._succ)
        if not (0 <= u < n and 0 <= v < n):
            raise UsageError(f"edge ({u}, {v}) references unknown vertex")
        if u == v:
            raise UsageError(f"self loop ({u}, {v}) not allowed")
        if (u, v) in self._eid:
            raise UsageError(f"parallel edge ({u}, {v}) not allowed")
        eid = len(self._ends)
        self._ends.append((u, v))
        self._eid[(u, v)] = eid
        insort(self._succ[u], (v, eid))
        insort(self._pred[v], (u, eid))
        return eid

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._eid[(u, v)]
        except KeyError:
            raise UsageError(f"unknown edge ({u}, {v})") from None

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._eid

    def endpoints(self, eid: int) -> Tuple[int, int]:
        return self._ends[eid]

    def succ(self, v: int) -> List[int]:
        return [u for u, _ in self._succ[v]]

    def pred(self, v: int) -> List[int]:
        return [u for u, _ in self._pred[v]]

    def succ_items(self, v: int) -> List[Tuple[int, int]]:
        """(neighbor, eid) pairs for out-edges of v. Callers must not mutate."""
        return self._succ[v]

    def pred_items(self, v: int) -> List[Tuple[int, int]]:
        """(neighbor, eid) pairs for in-edges of v. Callers must not mutate."""
        return self._pred[v]

    def edges(self) -> Iterable[Tuple[int, int, int]]:
        for eid, (u, v) in enumerate(self._ends):
            yield eid, u, v


def _check_weight(w, what):
    if isinstance(w, bool) or not isinstance(w, (int, float)):
        raise UsageError(f"{what} must be a number, got {w!r}")
    if math.isnan(w) or w <= 0:
        raise UsageError(f"{what} must be positive, got {w!r}")


class LazyWeights:
    """Per-edge weight store with deferred evaluation of true weights.

    estimates must be finite and positive; true weights positive or +inf and
    never below the estimate (worlds guarantee this, scan() audits it).
    inflation >= 1 scales the estimate of unevaluated edges only.
    """

    __slots__ = ("graph", "estimate", "truth", "_eval", "_count", "inflation",
                 "eval_delay_us")

    def __init__(self, graph: Graph, estimate: Sequence[float],
                 truth: Sequence[float], inflation: float = 1.0,
                 eval_delay_us: float = 0.0):
        if len(estimate) != graph.num_edges or len(truth) != graph.num_edges:
            raise UsageError("weight arrays must cover every edge")
        for w in estimate:
            _check_weight(w, "estimate")
            if math.isinf(w):
                raise UsageError("estimates must be finite")
        for w in truth:
            _check_weight(w, "true weight")
        self.graph = graph
        self.estimate = list(estimate)
        self.truth = list(truth)
        self._eval = bytearray(graph.num_edges)
        self._count = 0
        self.eval_delay_us = eval_delay_us
        self.set_inflation(inflation)

    @property
    def eval_count(self) -> int:
        """Total true-weight lookups performed so far (never reset)."""
        return self._count

    @property
    def evaluated_ids(self) -> List[int]:
        return [e for e, f in enumerate(self._eval) if f]

    def is_evaluated(self, eid: int) -> bool:
        return bool(self._eval[eid])

    def set_inflation(self, inflation: float):
        if not isinstance(inflation, (int, float)) or math.isnan(inflation) \
                or inflation < 1.0 or math.isinf(inflation):
            raise UsageError(f"inflation must be a finite number >= 1, got {inflation!r}")
        self.inflation = float(inflation)

    def lazy(self, eid: int) -> float:
        if self._eval[eid]:
            return self.truth[eid]
        return self.inflation * self.estimate[eid]

    def lazy_weight(self, u: int, v: int) -> float:
        return self.lazy(self.graph.edge_id(u, v))

    def evaluate(self, eid: int) -> Tuple[float, bool]:
        """Look up the true weight of an edge.

        Returns (true weight, changed) where changed means the reported lazy
        value moved. Re-evaluating an already evaluated edge is free: no
        counter increment, changed is False.
        """
        if self._eval[eid]:
            return self.truth[eid], False
        before = self.inflation * self.estimate[eid]
        if self.eval_delay_us > 0:
            deadline = time.perf_counter() + self.eval_delay_us * 1e-6
            while time.perf_counter() < deadline:
                pass
        self._eval[eid] = 1
        self._count += 1
        after = self.truth[eid]
        return after, after != before

    def evaluate_edge(self, u: int, v: int) -> Tuple[float, bool]:
        return self.evaluate(self.graph.edge_id(u, v))

    def apply_change_batch(self, batch: ChangeBatch) -> List[int]:
        """Install new true weights and revert those edges to unevaluated.

        The whole batch is validated before any edge is touched. Duplicate
        edges in one batch take the last value. Returns the touched edge ids,
        sorted ascending and unique.
        """
        resolved = []
        for item in batch:
            if len(item) != 3:
                raise UsageError(f"change entries are (source, target, weight), got {item!r}")
            u, v, w = item
            eid = self.graph.edge_id(u, v)
            _check_weight(w, f"new weight for edge ({u}, {v})")
            resolved.append((eid, float(w)))
        for eid, w in resolved:
            self.truth[eid] = w
            self._eval[eid] = 0
        return sorted({eid for eid, _ in resolved})

    def clear_evaluated(self):
        """Forget every evaluation (the counter is cumulative and survives)."""
        self._eval = bytearray(len(self._eval))

    def extend(self, estimate: Sequence[float], truth: Sequence[float]):
        """Absorb newly added edges; they start unevaluated."""
        if self.graph.num_edges != len(self.estimate) + len(estimate):
            raise UsageError("extend must cover exactly the edges added to the graph")
        for w in estimate:
            _check_weight(w, "estimate")
            if math.isinf(w):
                raise UsageError("estimates must be finite")
        for w in truth:
            _check_weight(w, "true weight")
        self.estimate.extend(estimate)
        self.truth.extend(truth)
        self._eval.extend(bytearray(len(estimate)))

    def scan(self) -> int:
        """Full invariant sweep; returns the number of violations (0 = clean).

        Checks per edge: the reported value matches its branch exactly, the
        reported value never exceeds inflation * true weight, and the estimate
        never exceeds the true weight.
        """
        bad = 0
        inflation = self.inflation
        for eid in range(len(self.estimate)):
            est = self.estimate[eid]
            tru = self.truth[eid]
            reported = self.lazy(eid)
            expected = tru if self._eval[eid] else inflation * est
            if reported != expected:
                bad += 1
            elif not reported <= inflation * tru:
                bad += 1
            elif not est <= tru:
                bad += 1
        return bad
