"""Command-line surface: exit codes, output formats, config file, output dir."""

import json
import math
import os

import numpy as np
import pytest

from copulagini.cli import OUTPUT_DIR_ENV, main, parse_marginal
from copulagini import Exponential, TabulatedQuantile, Uniform, eff_gini, load_catalog


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ------------------------------------------------------------ marginal grammar


def test_parse_marginal_grammar():
    assert parse_marginal("uniform:0,1") == Uniform(0.0, 1.0)
    assert parse_marginal("exp:2") == Exponential(2.0)
    assert parse_marginal("exponential:0.5") == Exponential(0.5)
    with pytest.raises(ValueError, match="bad numeric"):
        parse_marginal("uniform:0;1")
    with pytest.raises(ValueError):
        parse_marginal("uniform:0")
    with pytest.raises(ValueError):
        parse_marginal("lognormal:1,2")
    with pytest.raises(ValueError, match="CSV path"):
        parse_marginal("tabulated:")


def test_parse_marginal_tabulated(tmp_path):
    path = tmp_path / "grid.csv"
    path.write_text("p,x\n0.0,0.0\n1.0,2.0\n")
    m = parse_marginal(f"tabulated:{path}")
    assert isinstance(m, TabulatedQuantile)
    assert m.mean() == pytest.approx(1.0)


# ------------------------------------------------------------------- bivariate


def test_bivariate_clayton_uniform_json(capsys):
    code, out, _ = run(
        capsys, "bivariate", "--copula", "clayton", "--theta", "1",
        "--marginal-x", "uniform:0,1", "--marginal-y", "uniform:0,1",
    )
    assert code == 0
    data = json.loads(out)
    assert data["gini"] == pytest.approx(0.2274112, abs=1e-5)
    assert data["diagnostics"]["method"] == "sf_integral"
    assert data["diagnostics"]["converged"] is True
    assert set(data["bounds"]) >= {"fh_lower", "fh_upper", "jensen_lower", "violations"}
    assert data["bounds"]["violations"] == []


def test_bivariate_comonotone_exponentials(capsys):
    code, out, _ = run(
        capsys, "bivariate", "--copula", "m",
        "--marginal-x", "exp:1", "--marginal-y", "exp:1",
    )
    assert code == 0
    assert json.loads(out)["gmd"] == pytest.approx(0.0, abs=1e-10)


def test_bivariate_countermonotone_exponentials(capsys):
    code, out, _ = run(
        capsys, "bivariate", "--copula", "w",
        "--marginal-x", "exp:1", "--marginal-y", "exp:1",
    )
    assert code == 0
    assert json.loads(out)["gini"] == pytest.approx(math.log(2.0), abs=1e-6)


def test_bivariate_survival_orientation(capsys):
    code, out, _ = run(
        capsys, "bivariate", "--copula", "clayton", "--theta", "1",
        "--marginal-x", "exp:1", "--marginal-y", "exp:1",
        "--orientation", "survival",
    )
    assert code == 0
    assert json.loads(out)["gini"] == pytest.approx(1.0 - math.log(2.0), abs=1e-6)


def test_bivariate_csv_format(capsys):
    code, out, _ = run(
        capsys, "bivariate", "--copula", "w",
        "--marginal-x", "exp:1", "--marginal-y", "exp:1", "--format", "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "key,value"
    table = dict(line.split(",", 1) for line in lines[1:])
    assert float(table["gini"]) == pytest.approx(math.log(2.0), abs=1e-6)
    assert "bounds.fh_upper" in table
    assert "diagnostics.panels" in table


def test_bivariate_validation_exit_codes(capsys):
    bad_marginal = run(
        capsys, "bivariate", "--copula", "clayton", "--theta", "1",
        "--marginal-x", "uniform:0;1", "--marginal-y", "uniform:0,1",
    )
    assert bad_marginal[0] == 2
    assert "bad numeric" in bad_marginal[2]

    missing_theta = run(
        capsys, "bivariate", "--copula", "fgm",
        "--marginal-x", "uniform:0,1", "--marginal-y", "uniform:0,1",
    )
    assert missing_theta[0] == 2
    assert "--theta is required" in missing_theta[2]

    surplus_theta = run(
        capsys, "bivariate", "--copula", "m", "--theta", "1",
        "--marginal-x", "exp:1", "--marginal-y", "exp:1",
    )
    assert surplus_theta[0] == 2
    assert "not accepted" in surplus_theta[2]

    bad_parameter = run(
        capsys, "bivariate", "--copula", "clayton", "--theta", "-2",
        "--marginal-x", "uniform:0,1", "--marginal-y", "uniform:0,1",
    )
    assert bad_parameter[0] == 2

    missing_file = run(
        capsys, "bivariate", "--copula", "independence",
        "--marginal-x", "tabulated:/definitely/not/here.csv",
        "--marginal-y", "uniform:0,1",
    )
    assert missing_file[0] == 2
    assert "cannot read tabulated" in missing_file[2]


def test_bivariate_numerical_failure_exit_code(capsys):
    code, _, err = run(
        capsys, "bivariate", "--copula", "clayton", "--theta", "1",
        "--marginal-x", "uniform:0,1", "--marginal-y", "uniform:0,1",
        "--abs-tol", "1e-300", "--rel-tol", "1e-300", "--max-subdivisions", "10",
    )
    assert code == 3
    assert "did not converge" in err


def test_argparse_usage_errors_map_to_two(capsys):
    assert run(capsys, "bivariate")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "simulate", "--copula", "fgm", "--theta", "1",
               "--marginal-x", "exp:1", "--marginal-y", "exp:1",
               "--samples", "10")[0] == 2  # --seed missing


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "bivariate", "--help")[0] == 0


# ---------------------------------------------------------------- multivariate


@pytest.mark.parametrize("spec,n,want", [
    ("uniform:0,1", 3, 0.5),
    ("exp:1", 3, 9.0 / 13.0),
    ("exp:1", 2, 0.5),
])
def test_multivariate_iid_goldens(capsys, spec, n, want):
    code, out, _ = run(capsys, "multivariate", "--iid", spec, "--n", str(n))
    assert code == 0
    assert json.loads(out)["gini"] == pytest.approx(want, abs=1e-9)


def test_multivariate_needs_two_components(capsys):
    code, _, err = run(capsys, "multivariate", "--iid", "exp:1", "--n", "1")
    assert code == 2
    assert "at least 2" in err


# --------------------------------------------------------------------- tables


def test_tables_one_csv(capsys):
    code, out, _ = run(capsys, "tables", "--which", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "id,name,a1,a2,a3,a4,uniform,exponential"
    assert len(lines) == 29
    first = lines[1].split(",")
    assert first[0] == "1"
    assert float(first[-2]) == pytest.approx(0.5, abs=5e-4)
    assert float(first[-1]) == pytest.approx(0.409, abs=5e-4)
    last = lines[-1].rsplit(",", 2)
    assert float(last[-2]) == pytest.approx(1.0, abs=1e-9)


def test_tables_two_json(capsys):
    code, out, _ = run(capsys, "tables", "--which", "2", "--theta", "1",
                       "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 28
    assert rows[1]["exponential"] == pytest.approx(0.135, abs=5e-4)
    assert rows[1]["signature"] == [0, 1, 0, 0]


def test_tables_theta_usage(capsys):
    code, _, err = run(capsys, "tables", "--which", "1", "--theta", "1")
    assert code == 2
    assert "only applies to table 2" in err
    code, _, err = run(capsys, "tables", "--which", "2")
    assert code == 2
    assert "required for table 2" in err


# ---------------------------------------------------------------- figure data


def test_figure_data_uniform_curve(capsys):
    code, out, _ = run(capsys, "figure-data", "--copula", "fgm", "--theta", "1",
                       "--marginal", "uniform", "--points", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,delta,integrand"
    t, delta, integrand = (float(v) for v in lines[2].split(","))
    assert t == 0.5
    assert delta == pytest.approx(0.3125)
    assert integrand == pytest.approx(0.5 - 0.3125)


def test_figure_data_area_summaries(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(capsys, "figure-data", "--copula", "fgm", "--theta", "1",
                       "--marginal", "uniform", "--points", "512",
                       "--output", "fgm.csv")
    assert code == 0
    summary = json.loads(out)
    assert summary["area"] == pytest.approx(2.0 / 15.0, abs=1e-9)
    assert summary["gini"] == pytest.approx(4.0 / 15.0, abs=1e-9)
    assert (tmp_path / "fgm.csv").exists()

    code, out, _ = run(capsys, "figure-data", "--copula", "frank", "--theta", "1",
                       "--marginal", "uniform", "--points", "64",
                       "--output", "frank.csv")
    assert json.loads(out)["area"] == pytest.approx(0.1498039, abs=1e-6)

    code, out, _ = run(capsys, "figure-data", "--copula", "m",
                       "--marginal", "exponential", "--points", "64",
                       "--output", "m.csv")
    assert json.loads(out)["area"] == pytest.approx(0.0, abs=1e-10)
    body = (tmp_path / "m.csv").read_text().splitlines()
    assert body[0] == "t,ratio,integrand"


def test_figure_data_points_validation(capsys):
    code, _, err = run(capsys, "figure-data", "--copula", "fgm", "--theta", "1",
                       "--marginal", "uniform", "--points", "1")
    assert code == 2
    assert "at least 2" in err


# ------------------------------------------------------------------- simulate


def test_simulate_pair_mode_deterministic(tmp_path, capsys):
    args = (
        "simulate", "--copula", "clayton", "--theta", "1",
        "--marginal-x", "uniform:0,1", "--marginal-y", "uniform:0,1",
        "--seed", "42", "--samples", "20000",
    )
    code, out1, _ = run(capsys, *args)
    assert code == 0
    pay = json.loads(out1)
    assert pay["mode"] == "pairs"
    assert pay["n"] == 20000
    assert pay["analytic_gini"] == pytest.approx(0.2274112, abs=1e-5)
    assert abs(pay["gini_hat"] - pay["analytic_gini"]) < 0.02
    code, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_simulate_pair_mode_writes_samples(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(
        capsys, "simulate", "--copula", "fgm", "--theta", "1",
        "--marginal-x", "exp:1", "--marginal-y", "exp:1",
        "--seed", "7", "--samples", "500", "--samples-out", "draws.csv",
    )
    assert code == 0
    lines = (tmp_path / "draws.csv").read_text().splitlines()
    assert lines[0] == "x,y,l,u,z"
    assert len(lines) == 501
    row = [float(v) for v in lines[1].split(",")]
    assert row[4] == pytest.approx(abs(row[0] - row[1]), rel=1e-12)


def test_simulate_system_mode(capsys):
    code, out, _ = run(capsys, "simulate", "--system", "16", "--marginal", "exp:1",
                       "--seed", "11", "--samples", "200000")
    assert code == 0
    pay = json.loads(out)
    assert pay["mode"] == "system"
    assert pay["system_id"] == 16
    want = eff_gini(load_catalog()[15], Exponential(1.0))
    assert pay["analytic"] == pytest.approx(want, rel=1e-9)
    assert abs(pay["efficiency_hat"] - want) < 0.01


def test_simulate_mode_flag_conflicts(capsys):
    code, _, err = run(capsys, "simulate", "--system", "16", "--marginal", "exp:1",
                       "--copula", "fgm", "--seed", "1", "--samples", "10")
    assert code == 2
    assert "does not accept pair-model flags" in err
    code, _, err = run(capsys, "simulate", "--system", "16",
                       "--seed", "1", "--samples", "10")
    assert code == 2
    assert "--marginal is required" in err
    code, _, err = run(capsys, "simulate", "--system", "99", "--marginal", "exp:1",
                       "--seed", "1", "--samples", "10")
    assert code == 2
    assert "unknown system id" in err


# ------------------------------------------------------------------ config/env


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text(
        '[bivariate]\ncopula = "clayton"\ntheta = 1.0\n'
        'marginal-x = "uniform:0,1"\nmarginal-y = "uniform:0,1"\n'
    )
    code, out, _ = run(capsys, "bivariate", "--config", str(cfg))
    assert code == 0
    assert json.loads(out)["gini"] == pytest.approx(0.2274112, abs=1e-5)

    # explicit flags still win
    code, out, _ = run(capsys, "bivariate", "--config", str(cfg), "--theta", "2.0")
    assert code == 0
    assert json.loads(out)["gini"] < 0.2

    # --config may also precede the subcommand
    code, out, _ = run(capsys, "--config", str(cfg), "bivariate")
    assert code == 0


def test_config_file_error_handling(tmp_path, capsys):
    missing = run(capsys, "bivariate", "--config", str(tmp_path / "nope.toml"),
                  "--copula", "m", "--marginal-x", "exp:1", "--marginal-y", "exp:1")
    assert missing[0] == 2
    assert "cannot load config" in missing[2]

    bad = tmp_path / "bad.toml"
    bad.write_text("not toml ===")
    assert run(capsys, "bivariate", "--config", str(bad), "--copula", "m",
               "--marginal-x", "exp:1", "--marginal-y", "exp:1")[0] == 2

    typo = tmp_path / "typo.toml"
    typo.write_text('[bivariatee]\ncopula = "m"\n')
    code, _, err = run(capsys, "bivariate", "--config", str(typo), "--copula", "m",
                       "--marginal-x", "exp:1", "--marginal-y", "exp:1")
    assert code == 2
    assert "matches no subcommand" in err


def test_output_dir_env_resolves_relative_paths(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(
        capsys, "bivariate", "--copula", "m",
        "--marginal-x", "exp:1", "--marginal-y", "exp:1",
        "--output", os.path.join("nested", "report.json"),
    )
    assert code == 0
    target = tmp_path / "nested" / "report.json"
    assert target.exists()
    assert json.loads(target.read_text())["gmd"] == pytest.approx(0.0, abs=1e-10)


def test_absolute_output_ignores_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "elsewhere"))
    target = tmp_path / "direct.json"
    code, _, _ = run(
        capsys, "bivariate", "--copula", "m",
        "--marginal-x", "exp:1", "--marginal-y", "exp:1",
        "--output", str(target),
    )
    assert code == 0
    assert target.exists()
