"""Benchmark harness: run scenarios, certify against the oracle, emit CSV.

CSV rows are sorted by (planner, epoch) and floats are printed with repr, so
a scenario run twice produces byte-identical files; wall_time_us is reported
as 0 unless timing is requested, keeping the default output deterministic.
The thread count comes from the LAZYREPLAN_THREADS environment variable and
parallelizes across planner configs; each planner owns its weight store, the
world topology is shared read-only, so results do not depend on it.
"""

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

from .errors import UsageError
from .moving import MovingPlanner
from .oracle import check_bound, dijkstra_opt, dijkstra_to_target, path_to_target
from .scenario import validate_scenario
from .stationary import StationaryPlanner
from .worlds import build_world, densification_eps

INF = float("inf")

CSV_HEADER = ("scenario_id,epoch,planner,edge_evals,vertex_expansions,"
              "wall_time_us,path_cost,oracle_cost,bound_ok")

# roster names whose bound is fixed at eps1 = eps2 = 1
EXACT_PLANNERS = ("lpa", "gls", "lgls", "dstar", "gdstar")


@dataclass
class RunStats:
    scenario_id: str
    epoch: int
    planner: str
    edge_evals: int
    vertex_expansions: int
    wall_time_us: int
    path_cost: float
    oracle_cost: float
    bound_ok: bool


@dataclass
class ScenarioResult:
    rows: List[RunStats]
    max_pops_per_vertex: int = 0
    scan_violations: int = 0


def thread_count() -> int:
    raw = os.environ.get("LAZYREPLAN_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"LAZYREPLAN_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"LAZYREPLAN_THREADS must be >= 1, got {n}")
    return n


def _map_planners(fn, configs, threads):
    if threads > 1 and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(fn, configs))
    return [fn(pc) for pc in configs]


def run_scenario(cfg: dict, timing: bool = False, debug: bool = False,
                 threads: Optional[int] = None) -> ScenarioResult:
    configs = validate_scenario(cfg)
    if threads is None:
        threads = thread_count()
    world = build_world(cfg["world"], cfg["seed"])
    n = world.graph.num_vertices
    s = cfg["query"]["start"]
    t = cfg["query"]["goal"]
    if s >= n or t >= n:
        raise UsageError(f"query references vertex beyond the world's {n} vertices")
    sid = cfg["scenario_id"]
    epochs = cfg["changes"]["epochs"]
    delay = cfg.get("eval_delay_us", 0.0)
    mode = cfg["mode"]
    if mode == "stationary":
        result = _run_stationary(world, s, t, configs, epochs, sid, delay,
                                 timing, debug, threads)
    elif mode == "moving":
        result = _run_moving(world, s, t, configs, epochs, sid, delay,
                             timing, debug, threads)
    else:
        result = _run_densify(world, s, t, configs, cfg["changes"], sid,
                              delay, timing, debug, threads)
    result.rows.sort(key=lambda r: (r.planner, r.epoch))
    return result


def _run_stationary(world, s, t, configs, epochs, sid, delay, timing, debug,
                    threads) -> ScenarioResult:
    cache = {}
    lock = threading.Lock()

    def oracle(epoch):
        with lock:
            r = cache.get(epoch)
            if r is None:
                r = dijkstra_opt(world.graph, world.truth_for_epoch(epoch), s, t)
                cache[epoch] = r
            return r

    def run_one(pc):
        weights = world.make_weights(pc.eps1, delay)
        planner = StationaryPlanner(world.graph, weights, s, t, world.h, pc,
                                    debug=debug)
        rows = []
        max_pops = 0
        scans = 0
        for e in range(epochs):
            # Bill evaluations at the store so eager change application is
            # charged to the epoch that caused it.
            ev_mark = weights.eval_count
            if e:
                planner.apply_changes(world.change_batch(e))
            res = planner.solve_query()
            orc = oracle(e)
            ok = check_bound(res.cost, orc.cost, pc.eps1, pc.eps2)
            rows.append(RunStats(sid, e, pc.label,
                                 weights.eval_count - ev_mark,
                                 res.vertex_expansions,
                                 int(res.wall_time_us) if timing else 0,
                                 res.cost, orc.cost, ok))
            if debug:
                scans += weights.scan()
                max_pops = max(max_pops, planner.kernel.max_pops_per_vertex)
        return rows, max_pops, scans

    return _collect(_map_planners(run_one, configs, threads))


def _run_moving(world, s, t, configs, epochs, sid, delay, timing, debug,
                threads) -> ScenarioResult:
    batches = [world.change_batch(e) for e in range(1, epochs)]
    cache = {}
    lock = threading.Lock()

    def table(version):
        with lock:
            r = cache.get(version)
            if r is None:
                truth = world.truth_for_epoch(version)
                dist, nxt = dijkstra_to_target(world.graph, truth, t)
                r = (truth, nxt)
                cache[version] = r
            return r

    def run_one(pc):
        weights = world.make_weights(pc.eps1, delay)
        planner = MovingPlanner(world.graph, weights, s, t, world.h, pc,
                                debug=debug)
        scans = 0

        def after_plan(_res):
            nonlocal scans
            scans += weights.scan()

        episode = planner.run_to_goal(batches,
                                      on_plan=after_plan if debug else None)
        rows = []
        for i, row in enumerate(episode.rows):
            truth, nxt = table(min(i, len(batches)))
            ocost, _ = path_to_target(world.graph, truth, nxt, row.position, t)
            ok = check_bound(row.cost, ocost, pc.eps1, pc.eps2)
            rows.append(RunStats(sid, i, pc.label, row.edge_evals,
                                 row.vertex_expansions,
                                 int(row.wall_time_us) if timing else 0,
                                 row.cost, ocost, ok))
        max_pops = planner.kernel.max_pops_per_vertex if debug else 0
        return rows, max_pops, scans

    return _collect(_map_planners(run_one, configs, threads))


def _run_densify(world, s, t, configs, changes, sid, delay, timing, debug,
                 threads) -> ScenarioResult:
    # planners advance in lockstep because they share the growing topology
    epochs = changes["epochs"]
    batch_size = changes["batch_size"]
    schedule = changes.get("schedule", False)

    def eps_for(pc, q):
        """Effective (eps1, eps2) of this planner at vertex count q."""
        if schedule and pc.follow_schedule:
            return densification_eps(q)
        return pc.eps1, pc.eps2

    q0 = world.graph.num_vertices
    planners = []
    cur_eps = []
    for pc in configs:
        e1, e2 = eps_for(pc, q0)
        weights = world.make_weights(e1, delay)
        p = StationaryPlanner(world.graph, weights, s, t, world.h, pc,
                              debug=debug)
        p.kernel.set_eps2(e2)
        planners.append(p)
        cur_eps.append((e1, e2))
    rows = []
    max_pops = 0
    scans = 0
    for e in range(epochs + 1):
        ev_marks = [p.weights.eval_count for p in planners]
        if e:
            growth = world.densify(batch_size)
            q = world.graph.num_vertices
            for i, (pc, planner) in enumerate(zip(configs, planners)):
                e1, e2 = eps_for(pc, q)
                planner.absorb_growth(growth.estimate, growth.truth,
                                      growth.touched, eps1=e1, eps2=e2)
                cur_eps[i] = (e1, e2)
        orc = dijkstra_opt(world.graph, world.truth_for_epoch(0), s, t)
        for i, (pc, planner) in enumerate(zip(configs, planners)):
            res = planner.solve_query()
            e1, e2 = cur_eps[i]
            ok = check_bound(res.cost, orc.cost, e1, e2)
            rows.append(RunStats(sid, e, pc.label,
                                 planner.weights.eval_count - ev_marks[i],
                                 res.vertex_expansions,
                                 int(res.wall_time_us) if timing else 0,
                                 res.cost, orc.cost, ok))
            if debug:
                scans += planner.weights.scan()
                max_pops = max(max_pops, planner.kernel.max_pops_per_vertex)
    return ScenarioResult(rows, max_pops, scans)


def _collect(parts) -> ScenarioResult:
    rows = []
    max_pops = 0
    scans = 0
    for r, m, sc in parts:
        rows.extend(r)
        max_pops = max(max_pops, m)
        scans += sc
    return ScenarioResult(rows, max_pops, scans)


# -- CSV --------------------------------------------------------------------

def _fmt_cost(x: float) -> str:
    if x == INF:
        return "inf"
    return repr(float(x))


def rows_to_csv(rows: List[RunStats]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(f"{r.scenario_id},{r.epoch},{r.planner},{r.edge_evals},"
                     f"{r.vertex_expansions},{r.wall_time_us},"
                     f"{_fmt_cost(r.path_cost)},{_fmt_cost(r.oracle_cost)},"
                     f"{'true' if r.bound_ok else 'false'}")
    return "\n".join(lines) + "\n"


def write_csv(path: str, rows: List[RunStats]):
    with open(path, "w") as f:
        f.write(rows_to_csv(rows))


def _parse_cost(s: str, where: str) -> float:
    if s == "inf":
        return INF
    try:
        return float(s)
    except ValueError:
        raise UsageError(f"{where}: bad cost field {s!r}") from None


def read_csv(path: str) -> List[RunStats]:
    try:
        with open(path) as f:
            content = f.read()
    except FileNotFoundError:
        raise UsageError(f"csv file not found: {path}") from None
    lines = content.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise UsageError(f"{path}:1: expected header {CSV_HEADER!r}")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 9:
            raise UsageError(f"{path}:{i}: expected 9 fields, got {len(parts)}")
        where = f"{path}:{i}"
        try:
            epoch = int(parts[1])
            evs = int(parts[3])
            exps = int(parts[4])
            wall = int(parts[5])
        except ValueError:
            raise UsageError(f"{where}: bad integer field") from None
        if parts[8] not in ("true", "false"):
            raise UsageError(f"{where}: bound_ok must be true or false")
        rows.append(RunStats(parts[0], epoch, parts[2], evs, exps, wall,
                             _parse_cost(parts[6], where),
                             _parse_cost(parts[7], where),
                             parts[8] == "true"))
    return rows


def verify_csv(rows: List[RunStats], scenario: Optional[dict] = None) -> int:
    """Re-certify a results file; returns the number of rows re-checked.

    Row order must be (planner, epoch). With a scenario, every planner's eps
    pair is recovered from its label and every row is re-certified; without
    one, only the planners that are exact by definition can be re-checked.
    Raises InvariantViolation (via check_bound) or UsageError on mismatch.
    """
    keys = [(r.planner, r.epoch) for r in rows]
    if keys != sorted(keys):
        raise UsageError("rows are not sorted by (planner, epoch)")
    eps = {}
    if scenario is not None:
        for pc in validate_scenario(scenario):
            eps[pc.label] = (pc.eps1, pc.eps2)
    else:
        for name in EXACT_PLANNERS:
            eps[name] = (1.0, 1.0)
    checked = 0
    for r in rows:
        pair = eps.get(r.planner)
        if pair is None:
            if scenario is not None:
                raise UsageError(f"planner {r.planner!r} not in the scenario roster")
            continue
        expect = check_bound(r.path_cost, r.oracle_cost, pair[0], pair[1])
        if expect != r.bound_ok:
            raise UsageError(
                f"bound_ok mismatch for {r.planner!r} epoch {r.epoch}: "
                f"recorded {r.bound_ok}, recomputed {expect}")
        checked += 1
    return checked
