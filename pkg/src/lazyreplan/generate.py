"""Scenario builders: high-level knobs to schema-valid scenario dicts.

Used by the CLI's generate subcommand and by tests that need suites of
deterministic scenarios.
"""

from typing import List, Optional

from .errors import UsageError
from .scenario import SCHEMA_VERSION, validate_scenario
from .worlds import build_world, make_obstacle_scenes


def default_planners(mode: str) -> List[dict]:
    if mode == "stationary":
        return [{"name": "lgls"}]
    if mode == "moving":
        return [{"name": "gdstar"}]
    if mode == "densify":
        return [{"name": "lgls"}, {"name": "blgls", "schedule": True}]
    raise UsageError(f"unknown mode {mode!r}")


def _base(scenario_id, seed, mode, world, query, changes, planners,
          eval_delay_us=None) -> dict:
    cfg = {
        "schema_version": SCHEMA_VERSION,
        "scenario_id": scenario_id,
        "seed": seed,
        "mode": mode,
        "world": world,
        "query": query,
        "changes": changes,
        "planners": planners if planners is not None else default_planners(mode),
    }
    if eval_delay_us is not None:
        cfg["eval_delay_us"] = eval_delay_us
    validate_scenario(cfg)
    return cfg


def grid_scenario(scenario_id: str, seed: int, rows: int, cols: int, *,
                  connectivity: int = 8, mode: str = "stationary",
                  epochs: int = 6, n_scenes: int = 3, n_obstacles: int = 3,
                  disjoint_epoch: Optional[int] = None,
                  fraction: Optional[float] = None,
                  planners: Optional[List[dict]] = None,
                  start: Optional[int] = None, goal: Optional[int] = None,
                  eval_delay_us: Optional[float] = None) -> dict:
    """Grid world scenario; obstacle scenes cycle per epoch unless a fraction
    script is requested instead.

    disjoint_epoch designates one epoch whose only change is a block dropped
    on the far corner (away from the default corner-to-corner query), so an
    incremental lazy planner should do no work there.
    """
    world = {"kind": "grid", "rows": rows, "cols": cols,
             "connectivity": connectivity}
    if fraction is not None:
        world["fraction"] = fraction
    else:
        scenes = make_obstacle_scenes(seed, rows, cols, n_scenes, n_obstacles)
        sfe = [e % len(scenes) for e in range(epochs)]
        if disjoint_epoch is not None:
            if not 1 <= disjoint_epoch < epochs:
                raise UsageError("disjoint epoch must lie in 1..epochs-1")
            far = ("rect", -0.25, rows - 1.25, 0.25, rows - 0.75)
            scenes.append(list(scenes[sfe[disjoint_epoch - 1]]) + [far])
            sfe[disjoint_epoch] = len(scenes) - 1
        world["scenes"] = [[list(s) for s in scene] for scene in scenes]
        world["scene_for_epoch"] = sfe
    if start is None:
        start = 0
    if goal is None:
        goal = rows * cols - 1
    return _base(scenario_id, seed, mode, world,
                 {"start": start, "goal": goal}, {"epochs": epochs},
                 planners, eval_delay_us)


def roadmap_scenario(scenario_id: str, seed: int, n: int, k: int, *,
                     sampler: str = "halton", mode: str = "stationary",
                     epochs: int = 6, fraction: Optional[float] = 0.1,
                     scene: Optional[list] = None,
                     planners: Optional[List[dict]] = None,
                     start: Optional[int] = None, goal: Optional[int] = None,
                     eval_delay_us: Optional[float] = None) -> dict:
    """Roadmap scenario; changes rescale a fraction of the edges per epoch.

    Default query: vertex 0 to the sample farthest from it.
    """
    world = {"kind": "roadmap", "n": n, "k": k, "sampler": sampler}
    if fraction is not None:
        world["fraction"] = fraction
    if scene is not None:
        world["scene"] = [list(s) for s in scene]
    if start is None:
        start = 0
    if goal is None:
        w = build_world(world, seed)
        goal = max(range(n), key=lambda j: (w.h(start, j), j))
    return _base(scenario_id, seed, mode, world,
                 {"start": start, "goal": goal}, {"epochs": epochs},
                 planners, eval_delay_us)


def densify_scenario(scenario_id: str, seed: int, n: int, k: int, *,
                     sampler: str = "halton", epochs: int = 20,
                     batch_size: int = 100, schedule: bool = True,
                     scene: Optional[list] = None,
                     planners: Optional[List[dict]] = None,
                     start: Optional[int] = None, goal: Optional[int] = None,
                     eval_delay_us: Optional[float] = None) -> dict:
    """Static roadmap grown by batch_size samples per epoch; planners marked
    schedule=true follow the tightening eps schedule."""
    world = {"kind": "roadmap", "n": n, "k": k, "sampler": sampler}
    if scene is not None:
        world["scene"] = [list(s) for s in scene]
    if start is None:
        start = 0
    if goal is None:
        w = build_world(world, seed)
        goal = max(range(n), key=lambda j: (w.h(start, j), j))
    changes = {"epochs": epochs, "batch_size": batch_size,
               "schedule": schedule}
    return _base(scenario_id, seed, "densify", world,
                 {"start": start, "goal": goal}, changes,
                 planners, eval_delay_us)
