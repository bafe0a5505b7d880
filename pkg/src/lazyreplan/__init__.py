"""Lazy incremental replanning on explicit graphs.

Search kernels that defer edge evaluation behind inflated estimates,
repair shortest-path trees across edge-cost changes, and optionally
truncate repair once the incumbent path is provably within a bound.
Includes eager baselines, a brute-force oracle, deterministic synthetic
worlds, and a benchmark harness that emits CSV.
"""

from .bench import (CSV_HEADER, RunStats, ScenarioResult, read_csv,
                    rows_to_csv, run_scenario, thread_count, verify_csv,
                    write_csv)
from .errors import InvariantViolation, UsageError
from .generate import (densify_scenario, default_planners, grid_scenario,
                       roadmap_scenario)
from .graph import INF, Graph, LazyWeights
from .kernel import Event, SearchKernel
from .moving import AgentState, EpisodeResult, MovingPlanner, PlanRow
from .oracle import (OracleResult, brute_force_opt, check_bound, dijkstra_opt,
                     dijkstra_to_target, path_to_target)
from .pqueue import RepairQueue
from .scenario import (SCENARIO_SCHEMA, dump_scenario, load_scenario,
                       validate_scenario)
from .stationary import (DEFAULT_EPS, MOVING_ROSTER, ROSTER,
                         STATIONARY_ROSTER, PlannerConfig, QueryResult,
                         StationaryPlanner)
from .worlds import (World, build_grid, build_roadmap, build_world,
                     densification_eps, halton, make_obstacle_scenes,
                     segment_blocked)

__version__ = "0.1.0"

__all__ = [
    "AgentState", "CSV_HEADER", "DEFAULT_EPS", "EpisodeResult", "Event",
    "Graph", "INF", "InvariantViolation", "LazyWeights", "MOVING_ROSTER",
    "MovingPlanner", "OracleResult", "PlanRow", "PlannerConfig",
    "QueryResult", "ROSTER", "RepairQueue", "RunStats", "SCENARIO_SCHEMA",
    "STATIONARY_ROSTER", "ScenarioResult", "SearchKernel",
    "StationaryPlanner", "UsageError", "World", "brute_force_opt",
    "build_grid", "build_roadmap", "build_world", "check_bound",
    "default_planners", "densification_eps", "densify_scenario",
    "dijkstra_opt", "dijkstra_to_target", "dump_scenario", "grid_scenario",
    "halton", "load_scenario", "make_obstacle_scenes", "path_to_target",
    "read_csv", "roadmap_scenario", "rows_to_csv", "run_scenario",
    "segment_blocked", "thread_count", "validate_scenario", "verify_csv",
    "write_csv",
]
