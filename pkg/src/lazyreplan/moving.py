"""Moving-agent planners: the goal is fixed, the agent re-plans from wherever
it stands while edge weights change along the way.

The search tree is rooted at the goal and grown backward (rhs scans
out-edges), so agent motion never moves the root; keys carry the km drift term
and are re-anchored to the agent's position, with stale queue entries
re-keyed on pop. The same class covers, via config:

  dstar    eager evaluation, no truncation   (incremental baseline)
  tdstar   eager evaluation, truncation      (bounded incremental baseline)
  gdstar   lazy, incremental, exact
  bgdstar  lazy, incremental, truncation + inflation

plan() alternates repair passes with evaluation of the certified path taken
from the agent's end; step() commits one edge of the plan; observe_changes()
installs a change batch (never while a plan is in progress). run_to_goal()
interleaves all three, applying one scripted batch after each step until the
script runs out.
"""

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional

from .errors import InvariantViolation, UsageError
from .graph import ChangeBatch, Graph, LazyWeights
from .kernel import Event, SearchKernel
from .stationary import PlannerConfig, QueryResult

INF = float("inf")


@dataclass
class AgentState:
    current: int
    last: int
    km: float
    trajectory: List[int] = field(default_factory=list)


@dataclass
class PlanRow:
    position: int
    cost: float
    edge_evals: int
    vertex_expansions: int
    wall_time_us: float


@dataclass
class EpisodeResult:
    trajectory: List[int]
    traversed_cost: float
    rows: List[PlanRow]
    aborted: Optional[str] = None   # None, "unreachable", or "step_limit"

    @property
    def reached_goal(self) -> bool:
        return self.aborted is None


class MovingPlanner:
    def __init__(self, graph: Graph, weights: LazyWeights, start: int,
                 goal: int, hfun, config: PlannerConfig, debug=False):
        if not config.moving:
            raise UsageError(f"{config.name} is a stationary planner")
        n = graph.num_vertices
        if not (0 <= start < n and 0 <= goal < n):
            raise UsageError("start and goal must be existing vertices")
        if config.eager and weights.inflation != 1.0:
            raise UsageError("eager planners need an uninflated weight store")
        self.graph = graph
        self.weights = weights
        self.goal = goal
        self.hfun = hfun
        self.config = config
        self.debug = debug
        self._event = Event.from_config(config.event)
        self.state = AgentState(current=start, last=start, km=0.0,
                                trajectory=[start])
        self.traversed_cost = 0.0
        self.kernel = SearchKernel(
            graph, weights, root=goal, anchor=start, hfun=hfun,
            reverse=True, moving=True, eager=config.eager,
            truncating=config.truncating, eps2=config.eps2,
            strict_rule2=config.strict_rule2, debug=debug)

    @property
    def current(self) -> int:
        return self.state.current

    def plan(self) -> QueryResult:
        """Certify a fully evaluated path from the agent to the goal under the
        current weights. Path is in travel order (agent first)."""
        t0 = time.perf_counter()
        ev0 = self.weights.eval_count
        kernel = self.kernel
        ex0 = kernel.expansions
        cur = self.state.current
        if cur == self.goal:
            wall = (time.perf_counter() - t0) * 1e6
            return QueryResult([cur], 0.0, 0, 0, wall, rounds=0)
        weights = self.weights
        truth = weights.truth
        rounds = 0
        limit = 2 * self.graph.num_edges + 4
        while True:
            rounds += 1
            if rounds > limit:
                raise InvariantViolation("plan loop failed to settle")
            bundle = kernel.repair(self._event)
            if bundle is None:
                path, cost = [], INF
                break
            verts, eids = bundle
            changed_eid = None
            for eid in reversed(eids):   # from the agent's end
                if not weights.is_evaluated(eid):
                    _, changed = weights.evaluate(eid)
                    if changed:
                        changed_eid = eid
                        break
            if changed_eid is not None:
                tail, _ = self.graph.endpoints(changed_eid)
                kernel.update_vertex(tail)
            if self.config.truncating:
                kernel.clear_truncated()
            if changed_eid is None and verts[-1] == cur:
                path = list(reversed(verts))
                cost = math.fsum(truth[e] for e in eids)
                break
        wall = (time.perf_counter() - t0) * 1e6
        return QueryResult(path, cost,
                           weights.eval_count - ev0,
                           kernel.expansions - ex0, wall, rounds=rounds)

    def step(self) -> int:
        """Commit one edge of the current plan; returns the new position."""
        st = self.state
        if st.current == self.goal:
            raise UsageError("already at the goal")
        kernel = self.kernel
        nxt = kernel.bp[st.current]
        eid = kernel.bp_eid[st.current]
        if nxt is None:
            raise UsageError("step requires a successful plan")
        if not self.weights.is_evaluated(eid) or self.weights.truth[eid] == INF:
            raise UsageError("step requires the next edge planned and traversable")
        self.traversed_cost += self.weights.truth[eid]
        kernel.km += self.hfun(nxt, st.last)
        st.last = nxt
        st.current = nxt
        kernel.anchor = nxt
        st.trajectory.append(nxt)
        return nxt

    def observe_changes(self, batch: ChangeBatch):
        """Install new true weights between plans. The touched edges become
        unevaluated and their tail vertices are updated."""
        eids = self.weights.apply_change_batch(batch)
        if self.config.eager:
            for eid in eids:
                self.weights.evaluate(eid)
        tails = sorted({self.graph.endpoints(eid)[0] for eid in eids})
        for v in tails:
            self.kernel.update_vertex(v)

    def run_to_goal(self, batches: Optional[List[ChangeBatch]] = None,
                    step_limit: Optional[int] = None,
                    on_plan=None) -> EpisodeResult:
        """plan / step / observe one scripted batch, until the goal or abort.

        Each row's counters cover everything since the previous row (so a
        batch observed before a replan bills to that replan). on_plan, if
        given, is called after every recorded plan.
        """
        if batches is None:
            batches = []
        if step_limit is None:
            step_limit = 20 * self.graph.num_vertices + 100
        rows = []
        aborted = None
        next_batch = 0
        ev_mark = self.weights.eval_count
        ex_mark = self.kernel.expansions
        while self.state.current != self.goal:
            if len(self.state.trajectory) > step_limit:
                aborted = "step_limit"
                break
            res = self.plan()
            rows.append(PlanRow(
                position=self.state.current, cost=res.cost,
                edge_evals=self.weights.eval_count - ev_mark,
                vertex_expansions=self.kernel.expansions - ex_mark,
                wall_time_us=res.wall_time_us))
            ev_mark = self.weights.eval_count
            ex_mark = self.kernel.expansions
            if on_plan is not None:
                on_plan(res)
            if res.cost == INF:
                aborted = "unreachable"
                break
            self.step()
            if next_batch < len(batches):
                self.observe_changes(batches[next_batch])
                next_batch += 1
        return EpisodeResult(list(self.state.trajectory), self.traversed_cost,
                             rows, aborted)
