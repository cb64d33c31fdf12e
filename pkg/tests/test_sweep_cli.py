import math

import numpy as np
import pytest

from pinchsec import McConfig, Method
from pinchsec import cli
from pinchsec import sop as sop_mod
from pinchsec import validation
from pinchsec.sop import SopEstimate
from pinchsec.sweep import (
    Axis,
    SweepSpec,
    dump_distribution,
    format_float,
    run_sweep,
)
from pinchsec.validation import CheckResult

from conftest import make_config


def small_spec(**overrides):
    defaults = dict(
        x_axis=Axis.POWER_DBM,
        x_values=(0.0, 20.0, 40.0),
        base=make_config(),
        methods=(Method.MC, Method.CHEBYSHEV, Method.LOWER_PAS),
        mc=McConfig(trials=2_000, seed=5),
    )
    defaults.update(overrides)
    return SweepSpec(**defaults)


class TestSweepSpec:
    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError, match="x_values"):
            small_spec(x_values=())

    def test_rejects_non_increasing_grid(self):
        with pytest.raises(ValueError, match="increasing"):
            small_spec(x_values=(0.0, 0.0, 5.0))

    def test_rejects_empty_methods(self):
        with pytest.raises(ValueError, match="methods"):
            small_spec(methods=())

    def test_rejects_bad_order_and_tol(self):
        with pytest.raises(ValueError, match="chebyshev_order"):
            small_spec(chebyshev_order=0)
        with pytest.raises(ValueError, match="exact_tol"):
            small_spec(exact_tol=1.0)


class TestRunSweep:
    def test_row_structure(self):
        spec = small_spec()
        result = run_sweep(spec)
        assert len(result.rows) == len(spec.x_values) * len(spec.methods)
        keys = [(r.x, r.method.value) for r in result.rows]
        assert keys == sorted(keys)
        for row in result.rows:
            assert 0.0 <= row.sop <= 1.0
            if row.method is Method.MC:
                assert row.stderr is not None
                assert row.order_or_trials == 2_000
            else:
                assert row.stderr is None

    def test_lower_bound_column_is_constant(self):
        result = run_sweep(small_spec(methods=(Method.LOWER_PAS,)))
        values = {row.sop for row in result.rows}
        assert values == {(2.0 * math.pi - 1.0) / 24.0}

    def test_rate_axis_applies_rate(self):
        spec = small_spec(
            x_axis=Axis.RATE, x_values=(0.1, 1.0), methods=(Method.CHEBYSHEV,)
        )
        rows = run_sweep(spec).rows
        assert rows[0].sop < rows[1].sop  # outage grows with the rate

    def test_region_axis_applies_side(self):
        spec = small_spec(
            x_axis=Axis.REGION_SIDE, x_values=(10.0, 30.0), methods=(Method.CHEBYSHEV,)
        )
        rows = run_sweep(spec).rows
        assert rows[0].sop != rows[1].sop

    def test_csv_round_trips(self):
        csv = run_sweep(small_spec()).to_csv()
        lines = csv.strip().split("\n")
        assert lines[0] == "x,method,sop,stderr,order_or_trials"
        for line in lines[1:]:
            x, method, sop, stderr, count = line.split(",")
            assert float(x) in (0.0, 20.0, 40.0)
            assert 0.0 <= float(sop) <= 1.0
            assert stderr == "" or float(stderr) >= 0.0
            int(count)

    def test_format_float_is_lossless(self):
        for v in (0.1, 1 / 3, 0.22013272113248275, 1e-11, 7.26e4):
            assert float(format_float(v)) == v


class TestDumpDistribution:
    def test_eve_pdf_rows(self, cfg10):
        rows = dump_distribution("gamma-e-pdf", 1000, cfg10)
        assert len(rows) == 1002  # grid plus two flagged breakpoints
        flagged = [r for r in rows if r[2] == 1]
        assert len(flagged) == 2
        zs = [r[0] for r in rows]
        assert zs == sorted(zs)
        # trapezoid over the emitted rows recovers unit mass coarsely
        vals = [r[1] for r in rows]
        assert np.trapezoid(vals, zs) == pytest.approx(1.0, abs=1e-3)

    def test_bob_cdf_endpoints(self, cfg10):
        rows = dump_distribution("gamma-b-cdf", 100, cfg10)
        assert rows[0][1] == 0.0
        assert rows[-1][1] == 1.0
        assert all(flag == 0 for _, _, flag in rows)

    def test_offset_tags(self, cfg10):
        for tag in ("w-pdf", "chi-cdf"):
            rows = dump_distribution(tag, 50, cfg10)
            assert sum(flag for _, _, flag in rows) == 2
        cdf_rows = dump_distribution("chi-cdf", 50, cfg10)
        assert cdf_rows[0][1] == 0.0 and cdf_rows[-1][1] == 1.0

    def test_log_grid(self, cfg10):
        rows = dump_distribution("gamma-e-pdf", 100, cfg10, log_grid=True)
        assert len(rows) == 102
        with pytest.raises(ValueError, match="positive support"):
            dump_distribution("w-pdf", 100, cfg10, log_grid=True)

    def test_bad_inputs(self, cfg10):
        with pytest.raises(ValueError, match="unknown distribution"):
            dump_distribution("nope", 100, cfg10)
        with pytest.raises(ValueError, match="grid"):
            dump_distribution("w-pdf", 1, cfg10)


class TestCliSweep:
    BASE = [
        "sweep",
        "--x-values",
        "0,20",
        "--methods",
        "mc,lower-pas",
        "--trials",
        "2000",
        "--seed",
        "99",
    ]

    def test_csv_on_stdout(self, capsys):
        assert cli.main(self.BASE) == 0
        out = capsys.readouterr().out
        lines = out.strip().split("\n")
        assert lines[0] == "x,method,sop,stderr,order_or_trials"
        assert len(lines) == 5

    def test_worker_invariance_bytes(self, capsys):
        assert cli.main(self.BASE + ["--workers", "1"]) == 0
        first = capsys.readouterr().out
        assert cli.main(self.BASE + ["--workers", "4"]) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "sweep.csv"
        assert cli.main(self.BASE + ["--out", str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert target.read_text().startswith("x,method,sop")

    def test_unknown_method_is_usage_error(self, capsys):
        code = cli.main(["sweep", "--methods", "bogus"])
        assert code == 2
        assert "unknown method" in capsys.readouterr().err

    def test_empty_grid_is_usage_error(self, capsys):
        code = cli.main(["sweep", "--x-min", "10", "--x-max", "0"])
        assert code == 2
        err = capsys.readouterr().err
        assert "x-min" in err and "x-max" in err

    def test_invalid_physics_is_usage_error(self, capsys):
        code = cli.main(self.BASE + ["--height", "-3"])
        assert code == 2
        assert "height" in capsys.readouterr().err

    def test_default_grid_matches_builtin_defaults(self, capsys):
        assert cli.main(["sweep", "--methods", "lower-pas"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert len(lines) == 1 + 9  # 0:5:40 dBm

    def test_config_file_merges_beneath_flags(self, tmp_path, capsys):
        conf = tmp_path / "params.cfg"
        conf.write_text("trials=1000\nseed=7\n# comment\nregion-side=30\n")
        args = ["sweep", "--x-values", "20", "--methods", "mc", "--config", str(conf)]
        assert cli.main(args) == 0
        from_file = capsys.readouterr().out
        assert ",1000\n" in from_file or from_file.endswith(",1000\n")
        assert cli.main(args + ["--trials", "500"]) == 0
        overridden = capsys.readouterr().out
        assert ",500\n" in overridden or overridden.endswith(",500\n")
        assert from_file != overridden

    def test_config_file_seed_is_honored(self, tmp_path, capsys):
        conf = tmp_path / "params.cfg"
        conf.write_text("seed=7\n")
        base = ["sweep", "--x-values", "20", "--methods", "mc", "--trials", "2000"]
        assert cli.main(base + ["--config", str(conf)]) == 0
        via_file = capsys.readouterr().out
        assert cli.main(base + ["--seed", "7"]) == 0
        assert capsys.readouterr().out == via_file
        # the flag still wins over the file
        assert cli.main(base + ["--config", str(conf), "--seed", "8"]) == 0
        assert capsys.readouterr().out != via_file

    def test_config_file_unknown_key(self, tmp_path, capsys):
        conf = tmp_path / "params.cfg"
        conf.write_text("nonsense=1\n")
        assert cli.main(["sweep", "--config", str(conf)]) == 2
        assert "unknown key" in capsys.readouterr().err

    def test_seed_env_var(self, capsys, monkeypatch):
        args = ["sweep", "--x-values", "20", "--methods", "mc", "--trials", "2000"]
        monkeypatch.setenv("PINCH_SEED", "424242")
        assert cli.main(args) == 0
        via_env = capsys.readouterr().out
        monkeypatch.delenv("PINCH_SEED")
        assert cli.main(args + ["--seed", "424242"]) == 0
        via_flag = capsys.readouterr().out
        assert via_env == via_flag
        # flag wins over the environment
        monkeypatch.setenv("PINCH_SEED", "1")
        assert cli.main(args + ["--seed", "424242"]) == 0
        assert capsys.readouterr().out == via_flag


class TestCliDist:
    def test_rows_and_header(self, capsys):
        assert cli.main(["dist", "--which", "gamma-e-pdf", "--grid", "50"]) == 0
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "z,value,breakpoint"
        assert len(lines) == 1 + 52
        assert sum(int(line.split(",")[2]) for line in lines[1:]) == 2

    def test_grid_too_small(self, capsys):
        assert cli.main(["dist", "--which", "w-pdf", "--grid", "1"]) == 2


class TestCliValidate:
    def test_exit_zero_when_all_pass(self, capsys, monkeypatch):
        monkeypatch.setattr(
            validation, "run_checks", lambda level, seed: [CheckResult("x", True, "ok")]
        )
        monkeypatch.setattr(cli, "run_checks", validation.run_checks)
        assert cli.main(["validate", "--level", "fast"]) == 0
        assert "PASS x" in capsys.readouterr().out

    def test_exit_one_on_any_failure(self, capsys, monkeypatch):
        monkeypatch.setattr(
            cli, "run_checks", lambda level, seed: [CheckResult("bad", False, "broken")]
        )
        assert cli.main(["validate"]) == 1
        assert "FAIL bad" in capsys.readouterr().out

    def test_corrupted_constant_detected(self, monkeypatch):
        # the check suite must catch a corrupted bound implementation
        monkeypatch.setattr(
            sop_mod,
            "sop_lower_bound_pas",
            lambda: SopEstimate(0.25, Method.LOWER_PAS, 0),
        )
        results = validation._check_bound_constants(fast=True, seed=1)
        by_name = {r.name: r for r in results}
        assert not by_name["lower-bound-pas-constant"].passed
        assert not by_name["lower-bound-pas-integral"].passed
