"""Stationary planner family driven over the diamond fixture."""

import pytest

from lazyreplan import (Graph, INF, LazyWeights, PlannerConfig,
                        StationaryPlanner, UsageError, dijkstra_opt)

from conftest import S, A, B, G, h_zero


def make(diamond, name, eps1=None, eps2=None, **kw):
    g, est, truth = diamond
    cfg = PlannerConfig.from_name(name, eps1=eps1, eps2=eps2, **kw)
    w = LazyWeights(g, est, truth, inflation=cfg.eps1)
    return g, w, StationaryPlanner(g, w, S, G, h_zero, cfg)


CHANGE = [(A, G, 10.0)]


class TestConfig:
    def test_from_name_fills_bounded_defaults(self):
        assert PlannerConfig.from_name("tlpa").eps2 == 2.0
        assert PlannerConfig.from_name("blgls").eps1 == 1.2
        assert PlannerConfig.from_name("lgls").eps2 == 1.0

    def test_unknown_name_rejected(self):
        with pytest.raises(UsageError):
            PlannerConfig(name="bfs")

    def test_eager_with_inflation_rejected(self):
        with pytest.raises(UsageError):
            PlannerConfig.from_name("lpa", eps1=1.5)

    def test_eps2_on_plain_planner_rejected(self):
        with pytest.raises(UsageError):
            PlannerConfig.from_name("lgls", eps2=1.5)

    def test_label_defaults_to_name(self):
        cfg = PlannerConfig.from_name("lgls")
        assert cfg.label == "lgls"
        assert PlannerConfig.from_name("lgls", label="x").label == "x"

    def test_moving_names_rejected_by_stationary_planner(self, diamond):
        with pytest.raises(UsageError):
            make(diamond, "gdstar")

    def test_bad_query_vertices_rejected(self, diamond):
        g, est, truth = diamond
        cfg = PlannerConfig.from_name("lgls")
        w = LazyWeights(g, est, truth)
        with pytest.raises(UsageError):
            StationaryPlanner(g, w, S, 9, h_zero, cfg)


class TestLazyPlanner:
    def test_first_query_trusts_estimates(self, diamond):
        g, w, p = make(diamond, "lgls")
        res = p.solve_query()
        assert res.path == [S, A, G]
        assert res.cost == 2.0
        # only the two path edges were ever evaluated
        assert res.edge_evals == 2

    def test_change_reroutes_and_pays_the_lie(self, diamond):
        g, w, p = make(diamond, "lgls")
        p.solve_query()
        p.apply_changes(CHANGE)
        res = p.solve_query()
        assert res.path == [S, B, G]
        assert res.cost == 6.0
        # re-evaluates the changed edge, then discovers the s->b lie
        assert res.edge_evals == 3

    def test_requery_without_changes_is_free(self, diamond):
        g, w, p = make(diamond, "lgls")
        first = p.solve_query()
        again = p.solve_query()
        assert again.cost == first.cost
        assert again.edge_evals == 0
        assert again.vertex_expansions == 0

    def test_matches_oracle_through_changes(self, diamond):
        g, est, truth = diamond
        _, w, p = make(diamond, "lgls")
        assert p.solve_query().cost == dijkstra_opt(g, truth, S, G).cost
        p.apply_changes(CHANGE)
        truth2 = list(truth)
        truth2[g.edge_id(A, G)] = 10.0
        assert p.solve_query().cost == dijkstra_opt(g, truth2, S, G).cost

    def test_start_equals_goal(self, diamond):
        g, est, truth = diamond
        cfg = PlannerConfig.from_name("lgls")
        w = LazyWeights(g, est, truth)
        p = StationaryPlanner(g, w, A, A, h_zero, cfg)
        res = p.solve_query()
        assert res.path == [A] and res.cost == 0.0
        assert res.edge_evals == 0

    def test_unreachable_goal(self):
        g = Graph()
        g.add_vertices(3)
        g.add_edge(0, 1)
        w = LazyWeights(g, [1.0], [1.0])
        p = StationaryPlanner(g, w, 0, 2, h_zero,
                              PlannerConfig.from_name("lgls"))
        res = p.solve_query()
        assert res.cost == INF and res.path == []

    def test_goal_cut_off_by_evaluated_infinities(self, diamond):
        g, est, truth = diamond
        truth = list(truth)
        truth[g.edge_id(A, G)] = INF
        truth[g.edge_id(B, G)] = INF
        _, w, p = make((g, est, truth), "lgls")
        res = p.solve_query()
        assert res.cost == INF and res.path == []
        # both lies had to be evaluated before giving up
        assert w.is_evaluated(g.edge_id(A, G))
        assert w.is_evaluated(g.edge_id(B, G))


class TestEagerShim:
    def test_first_query_pays_everything_scanned(self, diamond):
        g, w, p = make(diamond, "lpa")
        res = p.solve_query()
        assert res.cost == 2.0
        assert res.edge_evals == 4

    def test_changes_cost_exactly_the_batch(self, diamond):
        g, w, p = make(diamond, "lpa")
        p.solve_query()
        before = w.eval_count
        p.apply_changes(CHANGE)
        assert w.eval_count - before == len(CHANGE)
        res = p.solve_query()
        assert res.cost == 6.0
        assert res.edge_evals == 0

    def test_eager_planner_requires_uninflated_store(self, diamond):
        g, est, truth = diamond
        w = LazyWeights(g, est, truth, inflation=1.2)
        with pytest.raises(UsageError):
            StationaryPlanner(g, w, S, G, h_zero,
                              PlannerConfig.from_name("lpa"))


class TestResetPlanner:
    def test_reset_forgets_evaluations(self, diamond):
        g, w, p = make(diamond, "gls")
        q1 = p.solve_query()
        assert q1.edge_evals == 2
        p.apply_changes(CHANGE)
        q2 = p.solve_query()
        assert q2.cost == 6.0
        # fresh search: rediscovers everything from scratch
        assert q2.edge_evals == 4

    def test_reset_equals_fresh_planner(self, diamond):
        g, est, truth = diamond
        _, w1, resetting = make(diamond, "gls")
        resetting.solve_query()
        resetting.apply_changes(CHANGE)
        r = resetting.solve_query()

        truth2 = list(truth)
        truth2[g.edge_id(A, G)] = 10.0
        w2 = LazyWeights(g, est, truth2)
        fresh = StationaryPlanner(g, w2, S, G, h_zero,
                                  PlannerConfig.from_name("lgls"))
        f = fresh.solve_query()
        assert r.cost == f.cost
        assert r.path == f.path
        assert r.edge_evals == f.edge_evals


class TestBoundedPlanner:
    @pytest.mark.parametrize("eps", [(1.0, 1.0), (1.2, 1.2), (1.0, 2.0)])
    def test_costs_stay_within_bound(self, diamond, eps):
        g, est, truth = diamond
        _, w, p = make(diamond, "blgls", eps1=eps[0], eps2=eps[1])
        res = p.solve_query()
        opt = dijkstra_opt(g, truth, S, G).cost
        assert opt <= res.cost <= eps[0] * eps[1] * opt
        p.apply_changes(CHANGE)
        truth2 = list(truth)
        truth2[g.edge_id(A, G)] = 10.0
        res = p.solve_query()
        opt = dijkstra_opt(g, truth2, S, G).cost
        assert opt <= res.cost <= eps[0] * eps[1] * opt

    def test_unit_eps_equals_plain_costs(self, diamond):
        _, _, bounded = make(diamond, "blgls", eps1=1.0, eps2=1.0)
        _, _, plain = make(diamond, "lgls")
        assert bounded.solve_query().cost == plain.solve_query().cost
        bounded.apply_changes(CHANGE)
        plain.apply_changes(CHANGE)
        assert bounded.solve_query().cost == plain.solve_query().cost

    def test_strict_rule2_variant_stays_bounded(self, diamond):
        g, est, truth = diamond
        _, w, p = make(diamond, "blgls", eps1=1.2, eps2=1.2,
                       strict_rule2=True)
        res = p.solve_query()
        opt = dijkstra_opt(g, truth, S, G).cost
        assert opt <= res.cost <= 1.44 * opt


class TestGrowth:
    def test_new_shortcut_is_found(self, diamond):
        g, w, p = make(diamond, "lgls")
        assert p.solve_query().cost == 2.0
        x = g.add_vertex()
        g.add_edge(S, x)
        g.add_edge(x, G)
        p.absorb_growth([0.5, 0.5], [0.5, 0.5], touched=[x, G])
        res = p.solve_query()
        assert res.path == [S, x, G]
        assert res.cost == 1.0

    def test_eps_schedule_tightening_refreshes(self, diamond):
        g, w, p = make(diamond, "blgls", eps1=1.2, eps2=1.2)
        p.solve_query()
        x = g.add_vertex()
        g.add_edge(S, x)
        g.add_edge(x, G)
        p.absorb_growth([0.5, 0.5], [0.5, 0.5], touched=[x, G],
                        eps1=1.1, eps2=1.05)
        assert w.inflation == 1.1
        assert p.kernel.eps2 == 1.05
        res = p.solve_query()
        assert res.cost == 1.0
