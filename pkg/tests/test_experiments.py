"""Tests for the experiment registry, evaluation tables, and VC tables."""

import numpy as np
import pytest

from strategia.domain import Hypothesis
from strategia.errors import ConfigError
from strategia.experiments import (
    available_experiments,
    describe_hypothesis,
    eval_table,
    run_experiment,
    vc_table,
)
from strategia.results import ResultTable, format_value
from strategia.scenarios import gen_component_case, gen_example2, gen_obs1, gen_random


def column(table: ResultTable, name: str) -> list:
    j = table.columns.index(name)
    return [row[j] for row in table.rows]


class TestResultTable:
    def test_formatting_contract(self):
        assert format_value(True) == "true"
        assert format_value(False) == "false"
        assert format_value(3) == "3"
        assert format_value(0.1 + 0.2) == "0.3"
        assert format_value(float("inf")) == "inf"
        assert format_value(float("nan")) == "nan"
        assert format_value(None) == ""

    def test_row_width_enforced(self):
        t = ResultTable(("a", "b"))
        with pytest.raises(ValueError):
            t.append(1)

    def test_csv_round_layout(self):
        t = ResultTable(("a", "b"))
        t.append(1, 0.5)
        t.append(2, None)
        assert t.to_csv_text() == "a,b\n1,0.5\n2,\n"


class TestDescribeHypothesis:
    def test_each_descriptor_kind(self):
        assert describe_hypothesis(
            Hypothesis(np.array([False, True]), ("threshold", 0, 1.5))
        ) == "threshold(axis=0,at=1.5)"
        assert describe_hypothesis(
            Hypothesis(np.array([True]), ("halfspace", (1.0, -2.0), 0.5))
        ) == "halfspace(w=(1,-2),b=0.5)"
        assert describe_hypothesis(
            Hypothesis(np.array([False, True]), ("singleton", 1))
        ) == "singleton(1)"
        assert describe_hypothesis(
            Hypothesis(np.array([False, False]), ("constant", 0))
        ) == "constant(0)"

    def test_bare_labels_fall_back_to_bits(self):
        assert describe_hypothesis(Hypothesis(np.array([True, False, True]))) == "101"


class TestEvalTable:
    def test_accept_threshold_line_rows(self):
        """On the four-point line, gaming shifts the loss mass one point down."""
        table = eval_table(gen_example2(0.25, 0.05, 0.45, 0.25))
        assert len(table) == 5
        names = column(table, "hypothesis")
        assert names[2] == "threshold(axis=0,at=2.5)"
        strategic = column(table, "strategic_loss")
        assert strategic[2] == 0.05
        assert strategic[3] == 0.45
        # the upper threshold is perfect after everyone responds
        assert column(table, "effective_binary_loss")[3] == 0.0
        assert column(table, "burden_conditional")[3] == 0.45 / 0.7
        assert column(table, "burden_numerator")[3] == 0.45
        # accepting everyone burdens nobody; rejecting everyone strands them
        assert column(table, "burden_numerator")[0] == 0.0
        assert column(table, "burden_conditional")[4] == float("inf")

    def test_edgeless_scenario_collapses_to_binary(self):
        """Without any edges the strategic column equals the binary column."""
        sc = gen_component_case("partial_order", poset="antichain", size=3)
        table = eval_table(sc)
        assert column(table, "strategic_loss") == column(table, "binary_loss")
        assert all(v == 0.0 for v in column(table, "component_loss"))
        assert all(column(table, "incentive_compatible"))
        labels = [describe_hypothesis(h) for h in sc.hclass]
        assert column(table, "effective_labels") == labels

    def test_burden_flag_blanks_burden_columns(self):
        table = eval_table(gen_example2(0.25, 0.05, 0.45, 0.25), burden=False)
        assert set(column(table, "burden_conditional")) == {None}
        assert set(column(table, "burden_numerator")) == {None}


class TestVcTable:
    def test_threshold_class_dimensions(self):
        sc = gen_example2(0.25, 0.25, 0.25, 0.25)
        table = vc_table(sc, targets=["class", "binary"])
        assert column(table, "dimension") == [1, 1]
        assert column(table, "capped") == [False, False]

    def test_blowup_strategic_dimension(self):
        table = vc_table(gen_obs1(3), targets=["strategic"])
        assert column(table, "dimension") == [3]
        assert column(table, "capped") == [False]

    def test_complete_graph_component_matches_class(self):
        sc = gen_component_case("complete", n=5, class_size=6, seed=3)
        table = vc_table(sc, targets=["class", "component"])
        dims = column(table, "dimension")
        assert dims[0] == dims[1]

    def test_default_targets_add_graph_when_candidates_exist(self):
        sc = gen_random(5, 4, seed=1, n_graphs=2)
        table = vc_table(sc)
        assert column(table, "target") == ["class", "binary", "strategic", "component", "graph"]

    def test_graph_target_without_candidates_rejected(self):
        with pytest.raises(ConfigError, match="candidate graphs"):
            vc_table(gen_random(5, 4, seed=1), targets=["graph"])

    def test_unknown_target_rejected(self):
        with pytest.raises(ConfigError, match="unknown target"):
            vc_table(gen_random(5, 4, seed=1), targets=["margin"])


class TestRegistry:
    def test_available_names(self):
        assert available_experiments() == [
            "example1", "example2", "graph-learn", "obs1",
            "thm3", "thm4", "thm5", "uniform-conv",
        ]

    def test_unknown_name_rejected(self):
        with pytest.raises(ConfigError, match="unknown experiment"):
            run_experiment("thm9")

    def test_unknown_param_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            run_experiment("example1", params={"m": 3})

    def test_trials_override_maps_to_draws(self):
        res = run_experiment("thm5", params={"n_points": 5, "n_hypotheses": 4}, trials=5)
        assert len(res.table) == 5

    def test_trials_override_maps_to_trials(self):
        res = run_experiment(
            "thm3",
            params={"eps_values": [0.1], "block": 10, "d": 2},
            trials=30,
            seed=3,
        )
        assert column(res.table, "trials") == [30]


class TestExperimentChecks:
    def test_example1_all_checks_pass(self):
        res = run_experiment("example1", seed=0)
        assert res.failures() == []
        assert len(res.table) == 11

    def test_example2_all_checks_pass(self):
        res = run_experiment("example2", seed=0)
        assert res.failures() == []
        assert column(res.table, "post_response_best") == [3.5] * 5

    def test_obs1_all_checks_pass(self):
        res = run_experiment("obs1", seed=0)
        assert res.failures() == []
        assert column(res.table, "class_vc") == [1, 1]
        assert column(res.table, "strategic_vc") == [2, 3]

    def test_thm5_small_run_passes(self):
        res = run_experiment("thm5", params={"draws": 25}, seed=11)
        assert res.failures() == []
        assert min(column(res.table, "min_slack")) >= -1e-12

    def test_graph_learn_run_passes(self):
        res = run_experiment("graph-learn", seed=4)
        assert res.failures() == []
        fields = dict(
            (r[0] + "." + r[1], r[2]) for r in res.table.rows
        )
        assert fields["bounds.min_slack"] >= -1e-12

    def test_experiment_reports_its_name(self):
        res = run_experiment("thm5", trials=3)
        assert res.name == "thm5"


class TestDeterminism:
    def test_thm3_worker_count_does_not_change_csv(self):
        kw = dict(params={"eps_values": [0.1], "block": 10, "d": 2}, trials=40, seed=7)
        a = run_experiment("thm3", workers=1, **kw)
        b = run_experiment("thm3", workers=2, **kw)
        assert a.table.to_csv_text() == b.table.to_csv_text()

    def test_thm4_worker_count_does_not_change_csv(self):
        kw = dict(
            params={"instances": 3, "n_points": 6, "n_hypotheses": 4,
                    "n_grid": [10, 40], "trials": 20},
            seed=5,
        )
        a = run_experiment("thm4", workers=1, **kw)
        b = run_experiment("thm4", workers=2, **kw)
        assert a.table.to_csv_text() == b.table.to_csv_text()

    def test_uniform_conv_worker_count_does_not_change_csv(self):
        kw = dict(
            params={"n_grid": [20, 80], "trials": 20, "block": 5},
            seed=9,
        )
        a = run_experiment("uniform-conv", workers=1, **kw)
        b = run_experiment("uniform-conv", workers=2, **kw)
        assert a.table.to_csv_text() == b.table.to_csv_text()

    def test_same_seed_same_bytes_across_runs(self):
        kw = dict(params={"draws": 10}, seed=13)
        assert (
            run_experiment("thm5", **kw).table.to_csv_text()
            == run_experiment("thm5", **kw).table.to_csv_text()
        )
