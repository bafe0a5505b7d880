"""Scenario file schema, cross-field validation, load/dump round-trips."""

import copy
import json

import pytest

from lazyreplan import UsageError
from lazyreplan.scenario import (dump_scenario, load_scenario,
                                 planner_from_spec, validate_scenario)


def grid_cfg(**over):
    cfg = {
        "schema_version": 1,
        "scenario_id": "unit-grid",
        "seed": 1,
        "mode": "stationary",
        "world": {"kind": "grid", "rows": 4, "cols": 4,
                  "scenes": [[], [["rect", 1.2, 1.2, 2.2, 2.2]]]},
        "query": {"start": 0, "goal": 15},
        "changes": {"epochs": 3},
        "planners": [{"name": "lgls"}],
    }
    cfg.update(over)
    return cfg


def roadmap_cfg(**over):
    cfg = grid_cfg(**over)
    cfg["scenario_id"] = "unit-roadmap"
    cfg["world"] = {"kind": "roadmap", "n": 20, "k": 4}
    cfg["query"] = {"start": 0, "goal": 19}
    return cfg


class TestSchema:
    def test_valid_grid_passes(self):
        configs = validate_scenario(grid_cfg())
        assert [c.name for c in configs] == ["lgls"]

    @pytest.mark.parametrize("field", ["scenario_id", "seed", "world",
                                       "mode", "query", "changes", "planners"])
    def test_missing_required_field(self, field):
        cfg = grid_cfg()
        del cfg[field]
        with pytest.raises(UsageError, match="scenario invalid"):
            validate_scenario(cfg)

    def test_wrong_schema_version(self):
        with pytest.raises(UsageError):
            validate_scenario(grid_cfg(schema_version=2))

    def test_unknown_top_level_key(self):
        with pytest.raises(UsageError):
            validate_scenario(grid_cfg(extra="nope"))

    def test_unknown_planner_name(self):
        with pytest.raises(UsageError):
            validate_scenario(grid_cfg(planners=[{"name": "astar"}]))

    def test_eps_below_one_rejected(self):
        with pytest.raises(UsageError):
            validate_scenario(grid_cfg(planners=[{"name": "blgls", "eps1": 0.5}]))

    def test_negative_query_rejected(self):
        cfg = grid_cfg()
        cfg["query"]["start"] = -1
        with pytest.raises(UsageError):
            validate_scenario(cfg)


class TestCrossField:
    def test_grid_needs_rows_cols(self):
        cfg = grid_cfg()
        del cfg["world"]["rows"]
        with pytest.raises(UsageError, match="rows"):
            validate_scenario(cfg)

    def test_grid_rejects_roadmap_fields(self):
        cfg = grid_cfg()
        cfg["world"]["n"] = 10
        with pytest.raises(UsageError, match="not a grid field"):
            validate_scenario(cfg)

    def test_roadmap_needs_n_k(self):
        cfg = roadmap_cfg()
        del cfg["world"]["k"]
        with pytest.raises(UsageError, match="k"):
            validate_scenario(cfg)

    def test_roadmap_k_below_n(self):
        cfg = roadmap_cfg()
        cfg["world"]["k"] = 20
        with pytest.raises(UsageError, match="k < n"):
            validate_scenario(cfg)

    def test_roadmap_rejects_grid_fields(self):
        cfg = roadmap_cfg()
        cfg["world"]["rows"] = 3
        with pytest.raises(UsageError, match="not a roadmap field"):
            validate_scenario(cfg)

    def test_mode_planner_compatibility(self):
        with pytest.raises(UsageError, match="stationary planner"):
            validate_scenario(grid_cfg(mode="moving"))
        with pytest.raises(UsageError, match="moving planner"):
            validate_scenario(grid_cfg(planners=[{"name": "gdstar"}]))

    def test_duplicate_labels_rejected(self):
        cfg = grid_cfg(planners=[{"name": "lgls", "label": "a"},
                                 {"name": "gls", "label": "a"}])
        with pytest.raises(UsageError, match="unique"):
            validate_scenario(cfg)

    def test_densify_constraints(self):
        cfg = roadmap_cfg(mode="densify")
        cfg["changes"] = {"epochs": 3, "batch_size": 5}
        validate_scenario(cfg)
        missing = copy.deepcopy(cfg)
        del missing["changes"]["batch_size"]
        with pytest.raises(UsageError, match="batch_size"):
            validate_scenario(missing)
        gridded = grid_cfg(mode="densify")
        gridded["changes"] = {"epochs": 3, "batch_size": 5}
        with pytest.raises(UsageError, match="roadmap"):
            validate_scenario(gridded)
        scripted = copy.deepcopy(cfg)
        scripted["world"]["fraction"] = 0.1
        with pytest.raises(UsageError, match="static"):
            validate_scenario(scripted)

    def test_batch_size_is_densify_only(self):
        cfg = grid_cfg()
        cfg["changes"]["batch_size"] = 5
        with pytest.raises(UsageError, match="densify-mode"):
            validate_scenario(cfg)

    def test_schedule_flag_is_densify_only(self):
        cfg = grid_cfg(planners=[{"name": "blgls", "schedule": True}])
        with pytest.raises(UsageError, match="densify-mode"):
            validate_scenario(cfg)

    def test_scene_script_bounds(self):
        cfg = grid_cfg()
        cfg["world"]["scene_for_epoch"] = [0, 1, 2]
        with pytest.raises(UsageError, match="missing scene"):
            validate_scenario(cfg)
        cfg["world"]["scene_for_epoch"] = [0, 1]
        with pytest.raises(UsageError, match="shorter"):
            validate_scenario(cfg)
        cfg["world"]["scene_for_epoch"] = [0, 1, 1]
        validate_scenario(cfg)


class TestPlannerSpec:
    def test_event_forms(self):
        assert planner_from_spec({"name": "lgls"}).event == "shortest"
        assert planner_from_spec({"name": "lgls", "event": 3}).event == 3
        with pytest.raises(UsageError):
            planner_from_spec({"name": "lgls", "event": "deep"})
        with pytest.raises(UsageError):
            planner_from_spec({"name": "lgls", "event": True})

    def test_eps_and_label_flow_through(self):
        cfg = planner_from_spec({"name": "blgls", "eps1": 1.2, "eps2": 1.4,
                                 "label": "tuned"})
        assert (cfg.eps1, cfg.eps2, cfg.label) == (1.2, 1.4, "tuned")


class TestFiles:
    def test_dump_load_roundtrip(self, tmp_path):
        path = str(tmp_path / "s.json")
        cfg = grid_cfg()
        dump_scenario(cfg, path)
        assert load_scenario(path) == cfg

    def test_missing_file(self):
        with pytest.raises(UsageError, match="not found"):
            load_scenario("/nonexistent/s.json")

    def test_json_error_carries_position(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"schema_version": 1,\n  "seed": }\n')
        with pytest.raises(UsageError, match=r"line 2 column"):
            load_scenario(str(path))

    def test_invalid_content_rejected_on_load(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps(grid_cfg(mode="densify")))
        with pytest.raises(UsageError):
            load_scenario(str(path))

    def test_dump_refuses_invalid(self, tmp_path):
        with pytest.raises(UsageError):
            dump_scenario(grid_cfg(schema_version=9), str(tmp_path / "x.json"))
