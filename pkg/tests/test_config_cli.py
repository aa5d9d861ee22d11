import csv
import json
from dataclasses import replace

import pytest

from cusumopt.cli import main
from cusumopt.config import (
    DEFAULT_SWEEP,
    SensitivitySpec,
    config_from_dict,
    config_to_dict,
    dump_config,
    load_config,
)
from cusumopt.moea import MoeaConfig
from cusumopt.report import FRONT_HEADER, PERCENTILES, percentile_summary, run_optimize
from cusumopt.run_length import arl_profile


def data_rows(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.reader(lines))


@pytest.fixture
def quick_config(tmp_path, yogurt_repro):
    """Small-budget reproduction config written to disk."""
    cfg = replace(yogurt_repro, moea=MoeaConfig(population_size=20, generations=15, rng_seed=4))
    path = tmp_path / "quick.json"
    dump_config(cfg, path)
    return str(path)


class TestConfig:
    def test_builtin_values(self, yogurt_cfg):
        assert yogurt_cfg.process.delta == 1.0 and yogurt_cfg.process.lam == 0.01
        c = yogurt_cfg.costs
        assert (c.c0, c.c1, c.w, c.y_cost, c.d, c.y_var) == (10, 100, 50, 25, 0.5, 0.1)
        assert (c.t, c.t0, c.t1, c.t2, c.gamma1, c.gamma2) == (0.05, 2, 2, 2, 1, 1)
        assert yogurt_cfg.space.n_range == (2, 20)
        assert yogurt_cfg.space.h_range == (0.01, 2.0)
        assert yogurt_cfg.space.H_range == (0.0001, 5.0)
        assert (yogurt_cfg.constraints.arl_lower_bound, yogurt_cfg.constraints.arl_upper_bound) == (200, 14)
        assert yogurt_cfg.constraints.policy.value == "enforce"
        assert yogurt_cfg.variant.name == "literal"

    def test_round_trip_fixed_point(self, yogurt_cfg, tmp_path):
        path = tmp_path / "c.json"
        dump_config(yogurt_cfg, path)
        again = load_config(path)
        assert again == yogurt_cfg
        assert dump_config(again) == dump_config(yogurt_cfg)

    def test_unknown_keys_rejected(self, yogurt_cfg):
        data = config_to_dict(yogurt_cfg)
        data["costs"]["c3"] = 1.0
        with pytest.raises(ValueError, match="c3"):
            config_from_dict(data)
        data = config_to_dict(yogurt_cfg)
        data["extra"] = {}
        with pytest.raises(ValueError, match="extra"):
            config_from_dict(data)

    def test_nested_invariants_checked(self, yogurt_cfg):
        data = config_to_dict(yogurt_cfg)
        data["constraints"]["arl_lower_bound"] = 5
        with pytest.raises(ValueError):
            config_from_dict(data)

    def test_factors(self, yogurt_cfg):
        assert yogurt_cfg.with_factor("lambda", 0.05).process.lam == 0.05
        assert yogurt_cfg.with_factor("t0", 5.0).factor("t0") == 5.0
        with pytest.raises(ValueError):
            yogurt_cfg.with_factor("gamma1", 0)

    def test_sensitivity_spec(self):
        assert SensitivitySpec.parse("c1:100:200") == SensitivitySpec("c1", 100.0, 200.0)
        for bad in ("c1:100", "nope:1:2", "c1:5:5"):
            with pytest.raises(ValueError):
                SensitivitySpec.parse(bad)
        assert {s.factor for s in DEFAULT_SWEEP} == {
            "delta", "c0", "c1", "w", "y_cost", "d", "y_var", "lambda", "t", "t0", "t1", "t2"}


class TestEvaluateCommand:
    def test_first_row(self, capsys):
        assert main(["evaluate", "2", "0.36", "4.19", "--format", "json"]) == 0
        report = json.loads(capsys.readouterr().out)["evaluation"]
        assert report["ARL_delta"] == pytest.approx(8.72, abs=0.005)
        assert report["ARL_0"] == pytest.approx(205.5, abs=0.05)
        assert report["literal.C_E"] == pytest.approx(18.74, abs=0.01)
        assert report["no_in_control_cost.C_E"] == pytest.approx(9.40, abs=0.01)
        assert report["feasible"] is True

    def test_text_output(self, capsys):
        assert main(["evaluate", "2", "0.71", "2.50"]) == 0
        lines = dict(line.split(None, 1) for line in capsys.readouterr().out.splitlines())
        assert float(lines["ARL_delta"]) == pytest.approx(5.38, abs=0.005)
        assert lines["feasible"].strip() == "False"

    def test_out_of_range(self, capsys):
        assert main(["evaluate", "0", "0.5", "1.0"]) == 2
        assert "n" in capsys.readouterr().err

    def test_missing_config(self, capsys, tmp_path):
        assert main(["evaluate", "2", "0.5", "1.0", "--config", str(tmp_path / "no.json")]) == 2


class TestOptimizeCommand:
    def test_writes_three_files(self, quick_config, tmp_path, capsys):
        out = tmp_path / "front.csv"
        assert main(["optimize", "--config", quick_config, "--out", str(out)]) == 0
        rows = data_rows(out.read_text())
        assert tuple(rows[0]) == FRONT_HEADER
        for r in rows[1:]:
            assert int(r[2]) >= 2
            for cell in (r[0], r[1], r[3], r[4]):
                assert len(cell.split(".")[1]) == 2
        meta = out.read_text()
        for key in ("# seed: 4", "# variant: no-in-control-cost", "# constraint_policy: off",
                    "# numpy:", "# package: cusumopt"):
            assert key in meta

        summary = data_rows((tmp_path / "front.summary.csv").read_text())
        assert summary[0] == ["percentile"] + list(FRONT_HEADER)
        assert [int(r[0]) for r in summary[1:]] == list(PERCENTILES)
        front_rows = [tuple(r) for r in rows[1:]]
        picked = [tuple(r[1:]) for r in summary[1:]]
        assert all(p in front_rows for p in picked)
        assert [front_rows.index(p) for p in picked] == sorted(front_rows.index(p) for p in picked)

        plot = data_rows((tmp_path / "front.plot.csv").read_text())
        assert plot[0] == ["C_E", "ARL_delta"] and len(plot) == len(rows)
        assert "pct" in capsys.readouterr().out

    def test_byte_identical(self, quick_config, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["optimize", "--config", quick_config, "--out", str(a)])
        main(["optimize", "--config", quick_config, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_seed_override_changes_metadata(self, quick_config, capsys):
        assert main(["optimize", "--config", quick_config, "--seed", "11"]) == 0
        assert "# seed: 11" in capsys.readouterr().out

    def test_json(self, quick_config, capsys):
        assert main(["optimize", "--config", quick_config, "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        rows = doc["rows"]
        assert rows and all(r["C_E"] == r["C_E_no_in_control_cost"] for r in rows)
        assert all(r["C_E_literal"] > r["C_E"] for r in rows)
        assert [s["percentile"] for s in doc["summary"]] == list(PERCENTILES)
        assert doc["metadata"]["variant"] == "no-in-control-cost"

    def test_infeasible_exit_status(self, tmp_path, yogurt_cfg):
        cfg = replace(yogurt_cfg, space=replace(yogurt_cfg.space, H_range=(0.0001, 1.0)),
                      moea=MoeaConfig(population_size=8, generations=3))
        path = tmp_path / "bad.json"
        dump_config(cfg, path)
        assert main(["optimize", "--config", str(path), "--out", str(tmp_path / "f.csv")]) == 1


class TestReproductionFront:
    def test_row_count(self, repro_front):
        assert 60 <= len(repro_front) <= 100
        assert repro_front.feasible
        share = sum(r.design.n == 2 for r in repro_front) / len(repro_front)
        assert share >= 0.9

    @pytest.mark.xfail(strict=True, reason="a few near-optimal n=3/4 rows survive in the finite "
                       "population; the exhaustive grid front is n=2 throughout")
    def test_all_rows_use_two_units(self, repro_front):
        assert {r.design.n for r in repro_front} == {2}


class TestPercentiles:
    def test_subset_and_order(self, yogurt_repro):
        front = run_optimize(replace(yogurt_repro, moea=MoeaConfig(population_size=20,
                                                                   generations=10)))
        picked = percentile_summary(front)
        assert [p for p, _ in picked] == list(PERCENTILES)
        idx = [front.rows.index(r) for _, r in picked]
        assert idx == sorted(idx) and idx[-1] == len(front) - 1


class TestSensitivityCommand:
    def test_t0_leaves_endpoints_unchanged(self, quick_config, capsys):
        assert main(["sensitivity", "--config", quick_config, "--factor", "t0:2:5"]) == 0
        rows = data_rows(capsys.readouterr().out)
        assert rows[0][:4] == ["factor", "level", "value", "endpoint"]
        body = rows[1:]
        assert [r[3] for r in body] == ["min_C_E", "max_C_E", "min_C_E", "max_C_E"]
        assert body[0][4:] == body[2][4:] and body[1][4:] == body[3][4:]

    def test_bad_factor_spec(self, quick_config):
        assert main(["sensitivity", "--config", quick_config, "--factor", "zeta:1:2"]) == 2

    def test_failing_factor_reported_and_sweep_continues(self, quick_config, capsys):
        code = main(["sensitivity", "--config", quick_config,
                     "--factor", "c1:100:5", "--factor", "w:50:60"])
        captured = capsys.readouterr()
        assert code == 1
        rows = data_rows(captured.out)[1:]
        assert [r[3] for r in rows].count("error") == 1
        assert any(r[0] == "w" and r[3] == "max_C_E" for r in rows)
        assert "c1" in captured.err


class TestSimulateCommand:
    def test_row1(self, capsys):
        assert main(["simulate", "--H", "4.19", "--K", "0.5", "--shift", "1",
                     "--replications", "20000", "--seed", "7", "--format", "json"]) == 0
        report = json.loads(capsys.readouterr().out)["simulation"]
        assert report["siegmund"] == pytest.approx(8.72, abs=0.005)
        assert abs(report["relative_error"]) <= 0.10
        assert report["mc_half_width_95"] > 0

    def test_zero_shift_reports_in_control(self, capsys):
        assert main(["simulate", "--H", "1.0", "--shift", "0", "--replications", "2000",
                     "--format", "json"]) == 0
        report = json.loads(capsys.readouterr().out)["simulation"]
        assert report["siegmund"] == pytest.approx(arl_profile(1.0, 1.0).arl0, rel=1e-14)

    def test_zero_replications(self, capsys):
        assert main(["simulate", "--H", "4.19", "--replications", "0"]) == 2
        assert "replications" in capsys.readouterr().err
