"""Scenario files: schema, validation, planner-spec parsing.

A scenario is one world, one start/goal query, one change script, and a
roster of planner configs. The CSV row format has no query column, so a file
carries exactly one query; sweeps are separate files.
"""

import json

import jsonschema

from .errors import UsageError
from .stationary import MOVING_ROSTER, PlannerConfig, ROSTER, STATIONARY_ROSTER

SCHEMA_VERSION = 1

_SHAPE = {
    "type": "array",
    "prefixItems": [{"enum": ["rect", "circle"]}],
    "minItems": 4,
    "maxItems": 5,
    "items": {"type": ["number", "string"]},
}

_SCENE = {"type": "array", "items": _SHAPE}

SCENARIO_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "scenario_id", "seed", "world", "mode",
                 "query", "changes", "planners"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "scenario_id": {"type": "string", "minLength": 1},
        "seed": {"type": "integer"},
        "mode": {"enum": ["stationary", "moving", "densify"]},
        "eval_delay_us": {"type": "number", "minimum": 0},
        "query": {
            "type": "object",
            "required": ["start", "goal"],
            "additionalProperties": False,
            "properties": {
                "start": {"type": "integer", "minimum": 0},
                "goal": {"type": "integer", "minimum": 0},
            },
        },
        "world": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["grid", "roadmap"]},
                "rows": {"type": "integer", "minimum": 1},
                "cols": {"type": "integer", "minimum": 1},
                "connectivity": {"enum": [4, 8]},
                "n": {"type": "integer", "minimum": 2},
                "k": {"type": "integer", "minimum": 1},
                "sampler": {"enum": ["halton", "uniform"]},
                "bounds": {"type": "array", "minItems": 4, "maxItems": 4,
                           "items": {"type": "number"}},
                "scenes": {"type": "array", "items": _SCENE, "minItems": 1},
                "scene": _SCENE,
                "scene_for_epoch": {"type": ["array", "null"],
                                    "items": {"type": "integer", "minimum": 0}},
                "fraction": {"type": ["number", "null"],
                             "exclusiveMinimum": 0, "maximum": 1},
            },
        },
        "changes": {
            "type": "object",
            "required": ["epochs"],
            "additionalProperties": False,
            "properties": {
                "epochs": {"type": "integer", "minimum": 1},
                "batch_size": {"type": "integer", "minimum": 1},
                "schedule": {"type": "boolean"},
            },
        },
        "planners": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name"],
                "additionalProperties": False,
                "properties": {
                    "name": {"enum": list(ROSTER)},
                    "eps1": {"type": "number", "minimum": 1},
                    "eps2": {"type": "number", "minimum": 1},
                    "event": {},
                    "label": {"type": "string", "minLength": 1},
                    "schedule": {"type": "boolean"},
                    "strict_rule2": {"type": "boolean"},
                },
            },
        },
    },
}


def planner_from_spec(spec: dict) -> PlannerConfig:
    event = spec.get("event")
    if event is not None and event != "shortest" \
            and not (isinstance(event, int) and not isinstance(event, bool)):
        raise UsageError(f"event must be 'shortest' or an integer, got {event!r}")
    return PlannerConfig.from_name(
        spec["name"], eps1=spec.get("eps1"), eps2=spec.get("eps2"),
        event=event, label=spec.get("label"),
        follow_schedule=spec.get("schedule", False),
        strict_rule2=spec.get("strict_rule2", False))


def validate_scenario(cfg: dict):
    """Schema plus cross-field checks; raises UsageError with a field path."""
    try:
        jsonschema.validate(cfg, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as e:
        raise UsageError(f"scenario invalid at {e.json_path}: {e.message}") from None
    world = cfg["world"]
    kind = world["kind"]
    if kind == "grid":
        for f in ("rows", "cols"):
            if f not in world:
                raise UsageError(f"grid world needs '{f}'")
        for f in ("n", "k", "sampler", "scene", "bounds"):
            if f in world:
                raise UsageError(f"'{f}' is not a grid field")
    else:
        for f in ("n", "k"):
            if f not in world:
                raise UsageError(f"roadmap world needs '{f}'")
        if world["k"] >= world["n"]:
            raise UsageError("roadmap needs k < n")
        for f in ("rows", "cols", "connectivity", "scenes", "scene_for_epoch"):
            if f in world:
                raise UsageError(f"'{f}' is not a roadmap field")
    mode = cfg["mode"]
    configs = [planner_from_spec(p) for p in cfg["planners"]]
    labels = [p.label for p in configs]
    if len(set(labels)) != len(labels):
        raise UsageError("planner labels must be unique within a scenario")
    for p in configs:
        if mode == "moving" and not p.moving:
            raise UsageError(f"{p.name} is a stationary planner; mode is moving")
        if mode in ("stationary", "densify") and p.moving:
            raise UsageError(f"{p.name} is a moving planner; mode is {mode}")
    changes = cfg["changes"]
    if mode == "densify":
        if kind != "roadmap":
            raise UsageError("densify mode needs a roadmap world")
        if world.get("fraction"):
            raise UsageError("densify mode needs a static world (no fraction script)")
        if "batch_size" not in changes:
            raise UsageError("densify mode needs changes.batch_size")
    else:
        if "batch_size" in changes or "schedule" in changes:
            raise UsageError("batch_size/schedule are densify-mode fields")
        for p in configs:
            if p.follow_schedule:
                raise UsageError("planner eps schedules are densify-mode only")
    sfe = world.get("scene_for_epoch")
    if sfe is not None:
        n_scenes = len(world.get("scenes") or [[]])
        if any(i >= n_scenes for i in sfe):
            raise UsageError("scene_for_epoch references a missing scene")
        if len(sfe) < changes["epochs"]:
            raise UsageError("scene_for_epoch shorter than the epoch count")
    return configs


def load_scenario(path: str) -> dict:
    try:
        with open(path) as f:
            cfg = json.load(f)
    except FileNotFoundError:
        raise UsageError(f"scenario file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise UsageError(
            f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    validate_scenario(cfg)
    return cfg


def dump_scenario(cfg: dict, path: str):
    validate_scenario(cfg)
    with open(path, "w") as f:
        json.dump(cfg, f, indent=2, sort_keys=True)
        f.write("\n")
