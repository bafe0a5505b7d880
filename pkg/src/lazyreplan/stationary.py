"""Stationary-query planners: repeated solves of one start/goal pair while the
world's true edge weights change between queries.

One class covers the whole family through its config:

  lpa    eager evaluation, no truncation        (classic incremental baseline)
  tlpa   eager evaluation, truncation at eps2   (bounded incremental baseline)
  gls    lazy, full reset before every query    (lazy but not incremental)
  lgls   lazy, incremental, exact
  blgls  lazy, incremental, truncation at eps2 and inflation eps1 in the store

A query alternates repair passes with path evaluation: repair() certifies a
path under the current lazy weights, then the path's edges are evaluated in
order from the start until one changes value; that vertex is updated and the
loop goes again. The query is done when a certified path to the goal is fully
evaluated and unchanged. Change batches between queries revert the touched
edges to unevaluated, so the next query re-discovers them only if it must.
"""

import math
import time
from dataclasses import dataclass
from typing import List, Optional, Union

from .errors import InvariantViolation, UsageError
from .graph import ChangeBatch, Graph, LazyWeights
from .kernel import Event, SearchKernel

INF = float("inf")

STATIONARY_ROSTER = ("lpa", "tlpa", "gls", "lgls", "blgls")
MOVING_ROSTER = ("dstar", "tdstar", "gdstar", "bgdstar")
ROSTER = STATIONARY_ROSTER + MOVING_ROSTER

# eps defaults for the bounded names when a scenario gives none
DEFAULT_EPS = {
    "tlpa": (1.0, 2.0),
    "blgls": (1.2, 1.2),
    "tdstar": (1.0, 2.0),
    "bgdstar": (1.2, 1.2),
}


@dataclass
class PlannerConfig:
    name: str
    eager: bool = False
    truncating: bool = False
    reset_between_queries: bool = False
    eps1: float = 1.0
    eps2: float = 1.0
    event: Union[str, int] = "shortest"
    follow_schedule: bool = False   # densification eps schedule applies
    strict_rule2: bool = False
    label: Optional[str] = None     # CSV planner column; defaults to name

    def __post_init__(self):
        if self.name not in ROSTER:
            raise UsageError(f"unknown planner {self.name!r}; roster: {', '.join(ROSTER)}")
        if self.eager and self.eps1 != 1.0:
            raise UsageError("eager planners evaluate everything; eps1 must be 1")
        if not self.truncating and self.eps2 != 1.0:
            raise UsageError(f"{self.name} takes no eps2")
        if self.eps1 < 1.0 or self.eps2 < 1.0:
            raise UsageError("eps1 and eps2 must be >= 1")
        Event.from_config(self.event)
        if self.label is None:
            self.label = self.name

    @property
    def moving(self) -> bool:
        return self.name in MOVING_ROSTER

    @classmethod
    def from_name(cls, name, eps1=None, eps2=None, event=None, **kw):
        """Roster name plus optional overrides; bounded names get their
        default eps pair when none is given."""
        d1, d2 = DEFAULT_EPS.get(name, (1.0, 1.0))
        if eps1 is None:
            eps1 = d1
        if eps2 is None:
            eps2 = d2
        eager = name in ("lpa", "tlpa", "dstar", "tdstar")
        truncating = name in ("tlpa", "blgls", "tdstar", "bgdstar")
        reset = name == "gls"
        if event is None:
            event = "shortest"
        return cls(name=name, eager=eager, truncating=truncating,
                   reset_between_queries=reset, eps1=eps1, eps2=eps2,
                   event=event, **kw)


@dataclass
class QueryResult:
    path: List[int]
    cost: float
    edge_evals: int
    vertex_expansions: int
    wall_time_us: float
    rounds: int = 1


class StationaryPlanner:
    """Drives one kernel over solve_query / apply_changes cycles."""

    def __init__(self, graph: Graph, weights: LazyWeights, start: int,
                 goal: int, hfun, config: PlannerConfig, debug=False):
        if config.moving:
            raise UsageError(f"{config.name} is a moving planner")
        n = graph.num_vertices
        if not (0 <= start < n and 0 <= goal < n):
            raise UsageError("start and goal must be existing vertices")
        if config.eager and weights.inflation != 1.0:
            raise UsageError("eager planners need an uninflated weight store")
        self.graph = graph
        self.weights = weights
        self.start = start
        self.goal = goal
        self.hfun = hfun
        self.config = config
        self.debug = debug
        self._event = Event.from_config(config.event)
        self._new_kernel()

    def _new_kernel(self):
        self.kernel = SearchKernel(
            self.graph, self.weights, root=self.start, anchor=self.goal,
            hfun=self.hfun, reverse=False, moving=False,
            eager=self.config.eager, truncating=self.config.truncating,
            eps2=self.config.eps2, strict_rule2=self.config.strict_rule2,
            debug=self.debug)

    def reset(self):
        """Drop all search state and all evaluations (evaluation counter is
        cumulative and survives)."""
        self.weights.clear_evaluated()
        self._new_kernel()

    def solve_query(self) -> QueryResult:
        t0 = time.perf_counter()
        ev0 = self.weights.eval_count
        if self.config.reset_between_queries:
            self.reset()
        kernel = self.kernel
        ex0 = kernel.expansions
        if self.start == self.goal:
            wall = (time.perf_counter() - t0) * 1e6
            return QueryResult([self.start], 0.0, 0, 0, wall, rounds=0)
        weights = self.weights
        truth = weights.truth
        rounds = 0
        limit = 2 * self.graph.num_edges + 4
        while True:
            rounds += 1
            if rounds > limit:
                raise InvariantViolation("query loop failed to settle")
            bundle = kernel.repair(self._event)
            if bundle is None:
                path, cost = [], INF
                break
            verts, eids = bundle
            changed_eid = None
            for eid in eids:
                if not weights.is_evaluated(eid):
                    _, changed = weights.evaluate(eid)
                    if changed:
                        changed_eid = eid
                        break
            if changed_eid is not None:
                # the head's rhs read this edge; repair resumes from there
                _, head = self.graph.endpoints(changed_eid)
                kernel.update_vertex(head)
            if self.config.truncating:
                kernel.clear_truncated()
            if changed_eid is None and verts[-1] == self.goal:
                path = verts
                cost = math.fsum(truth[e] for e in eids)
                break
        wall = (time.perf_counter() - t0) * 1e6
        return QueryResult(path, cost,
                           self.weights.eval_count - ev0,
                           kernel.expansions - ex0, wall, rounds=rounds)

    def apply_changes(self, batch: ChangeBatch):
        """Install new true weights; the touched edges become unevaluated and
        their head vertices are updated. Eager configs re-evaluate on the spot."""
        eids = self.weights.apply_change_batch(batch)
        if self.config.eager:
            for eid in eids:
                self.weights.evaluate(eid)
        targets = sorted({self.graph.endpoints(eid)[1] for eid in eids})
        for v in targets:
            self.kernel.update_vertex(v)

    def absorb_growth(self, new_estimate, new_truth, touched: List[int],
                      eps1=None, eps2=None):
        """Take on board edges/vertices added to the shared graph, then apply
        an optional new eps pair (inflation change forces a full refresh)."""
        self.weights.extend(new_estimate, new_truth)
        self.kernel.ensure_size()
        if eps1 is not None and eps1 != self.weights.inflation:
            if self.config.eager and eps1 != 1.0:
                raise UsageError("eager planners need an uninflated weight store")
            self.weights.set_inflation(eps1)
            if eps2 is not None:
                self.kernel.set_eps2(eps2)
            self.kernel.refresh_all()
            return
        if eps2 is not None:
            self.kernel.set_eps2(eps2)
        for v in sorted(set(touched)):
            self.kernel.update_vertex(v)
