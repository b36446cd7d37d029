"""Command-line interface.

Subcommands mirror the library surface: ``bivariate`` and ``multivariate``
compute index reports, ``tables`` emits the 28-system efficiency tables,
``figure-data`` emits diagonal-section curves with their shaded areas, and
``simulate`` runs seeded Monte Carlo against the analytic values.

Exit codes: 0 success, 2 argument/validation failure, 3 numerical failure.
A TOML file passed via ``--config`` supplies defaults for any long flag of
the chosen subcommand; explicit flags always win.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .copulas import Clayton, Fgm, Frank, Independence, LowerFrechet, UpperFrechet
from .gini import (
    BivariateModel,
    MultivariateIdModel,
    bounds_report,
    gmd_bivariate,
    gmd_multivariate,
)
from .marginals import (
    Exponential,
    MarginalDistribution,
    TabulatedQuantile,
    Uniform,
)
from .quadrature import (
    IntegrandEvaluationError,
    NonConvergenceError,
    QuadratureConfig,
    integrate_unit,
)
from .sampling import SeededStream, empirical_efficiency, empirical_indices, sample_pairs
from .systems import eff_gini, load_catalog, table1, table2

OUTPUT_DIR_ENV = "COPULAGINI_OUTPUT_DIR"

_PARAMETRIC = ("fgm", "clayton", "frank")
_COPULA_CHOICES = ("independence", "m", "w") + _PARAMETRIC
_ORIENTATION = {"cdf": "given_cdf_copula", "survival": "given_survival_copula"}


def parse_marginal(spec: str) -> MarginalDistribution:
    """Parse the ``name:param[,param]`` marginal mini-grammar."""
    name, sep, rest = spec.partition(":")
    name = name.strip().lower()
    if name == "tabulated":
        if not sep or not rest.strip():
            raise ValueError("tabulated marginal needs a CSV path: tabulated:points.csv")
        try:
            return TabulatedQuantile.from_csv(rest.strip())
        except OSError as exc:
            raise ValueError(f"cannot read tabulated marginal: {exc}") from exc
    params = []
    if sep:
        for piece in rest.split(","):
            piece = piece.strip()
            if not piece:
                raise ValueError(f"empty parameter in marginal spec {spec!r}")
            try:
                params.append(float(piece))
            except ValueError:
                raise ValueError(
                    f"bad numeric parameter {piece!r} in marginal spec {spec!r}"
                ) from None
    if name == "uniform":
        if len(params) != 2:
            raise ValueError("uniform marginal needs two parameters: uniform:a,b")
        return Uniform(params[0], params[1])
    if name in ("exp", "exponential"):
        if len(params) != 1:
            raise ValueError("exponential marginal needs one parameter: exp:rate")
        return Exponential(params[0])
    raise ValueError(
        f"unknown marginal {name!r}; expected uniform:a,b, exp:rate, "
        f"or tabulated:path.csv"
    )


def build_copula(name: str, theta):
    name = name.strip().lower()
    if name in _PARAMETRIC:
        if theta is None:
            raise ValueError(f"--theta is required for the {name} copula")
        return {"fgm": Fgm, "clayton": Clayton, "frank": Frank}[name](theta)
    if theta is not None:
        raise ValueError(f"--theta is not accepted for the {name} copula")
    if name == "independence":
        return Independence()
    if name == "m":
        return UpperFrechet()
    if name == "w":
        return LowerFrechet()
    raise ValueError(f"unknown copula {name!r}")


def _quad_config(ns) -> QuadratureConfig:
    return QuadratureConfig(
        abs_tol=ns.abs_tol,
        rel_tol=ns.rel_tol,
        max_subdivisions=ns.max_subdivisions,
    )


def _resolve_output(path_text):
    if path_text is None:
        return None
    path = Path(path_text)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text if text.endswith("\n") else text + "\n")


def _flatten(prefix: str, value, rows: list) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(f"{prefix}.{key}" if prefix else str(key), value[key], rows)
    elif isinstance(value, (list, tuple)):
        rows.append((prefix, ";".join(str(v) for v in value)))
    else:
        rows.append((prefix, value))


def _report_text(report_dict: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report_dict, indent=2, sort_keys=True)
    rows: list = []
    _flatten("", report_dict, rows)
    lines = ["key,value"]
    for key, value in rows:
        if isinstance(value, float):
            lines.append(f"{key},{value:.17g}")
        else:
            lines.append(f"{key},{value}")
    return "\n".join(lines)


def _add_quadrature_flags(sub) -> None:
    defaults = QuadratureConfig()
    sub.add_argument("--abs-tol", type=float, default=defaults.abs_tol,
                     help="absolute quadrature tolerance")
    sub.add_argument("--rel-tol", type=float, default=defaults.rel_tol,
                     help="relative quadrature tolerance")
    sub.add_argument("--max-subdivisions", type=int,
                     default=defaults.max_subdivisions,
                     help="adaptive panel budget")


def _add_output_flags(sub, formats=("json", "csv")) -> None:
    sub.add_argument("--format", choices=formats, default=formats[0],
                     help="output format")
    sub.add_argument("--output", default=None,
                     help=f"output path (relative paths honor ${OUTPUT_DIR_ENV})")


def _cmd_bivariate(ns) -> int:
    copula = build_copula(ns.copula, ns.theta)
    model = BivariateModel(
        copula=copula,
        marginal_x=parse_marginal(ns.marginal_x),
        marginal_y=parse_marginal(ns.marginal_y),
        orientation=_ORIENTATION[ns.orientation],
    )
    cfg = _quad_config(ns)
    report = gmd_bivariate(model, ns.form, cfg)
    bounds = bounds_report(model, cfg)
    report = dataclasses.replace(report, bounds=bounds.to_dict())
    if not report.diagnostics.get("converged", False):
        sys.stderr.write("error: quadrature did not converge within the panel budget\n")
        return 3
    _emit(_report_text(report.to_dict(), ns.format), _resolve_output(ns.output))
    return 0


def _cmd_multivariate(ns) -> int:
    if ns.n < 2:
        raise ValueError("--n must be at least 2")
    model = MultivariateIdModel.iid(ns.n, parse_marginal(ns.iid))
    report = gmd_multivariate(model, _quad_config(ns))
    if not report.diagnostics.get("converged", False):
        sys.stderr.write("error: quadrature did not converge within the panel budget\n")
        return 3
    _emit(_report_text(report.to_dict(), ns.format), _resolve_output(ns.output))
    return 0


def _table_text(rows: list, fmt: str) -> str:
    if fmt == "json":
        payload = []
        for row in rows:
            entry = dict(row)
            entry["signature"] = list(entry["signature"])
            payload.append(entry)
        return json.dumps(payload, indent=2)
    lines = ["id,name,a1,a2,a3,a4,uniform,exponential"]
    for row in rows:
        a = row["signature"]
        name = row["name"]
        if "," in name:
            name = '"' + name + '"'
        lines.append(
            f"{row['id']},{name},{a[0]},{a[1]},{a[2]},{a[3]},"
            f"{row['uniform']:.3f},{row['exponential']:.3f}"
        )
    return "\n".join(lines)


def _cmd_tables(ns) -> int:
    if ns.which == 1:
        if ns.theta is not None:
            raise ValueError("--theta only applies to table 2")
        rows = table1(_quad_config(ns))
    else:
        if ns.theta is None:
            raise ValueError("--theta is required for table 2")
        rows = table2(ns.theta, _quad_config(ns))
    _emit(_table_text(rows, ns.format), _resolve_output(ns.output))
    return 0


def _cmd_figure_data(ns) -> int:
    copula = build_copula(ns.copula, ns.theta)
    if ns.points < 2:
        raise ValueError("--points must be at least 2")
    cfg = _quad_config(ns)
    ts = np.linspace(0.0, 1.0, ns.points + 1)[1:]
    if ns.marginal == "uniform":
        # the family is the distributional copula; the index is twice the
        # area between the diagonal of the square and the copula diagonal
        curve = np.asarray(copula.diagonal(ts), dtype=float)
        integrand = ts - curve
        res = integrate_unit(lambda u: u - copula.diagonal(u), cfg)
        if not res.converged:
            sys.stderr.write("error: area integral did not converge\n")
            return 3
        area = res.value
        gini = 2.0 * area
        header = "t,delta,integrand"
    else:
        # the family is the survival copula; for unit-rate exponentials the
        # index is one minus the integral of diag(t)/t
        curve = np.asarray(copula.diagonal(ts), dtype=float) / ts
        integrand = 1.0 - curve
        res = integrate_unit(lambda u: copula.diagonal(u) / u, cfg)
        if not res.converged:
            sys.stderr.write("error: area integral did not converge\n")
            return 3
        gini = 1.0 - res.value
        area = gini
        header = "t,ratio,integrand"
    lines = [header]
    for t, c, g in zip(ts, curve, integrand):
        lines.append(f"{t:.17g},{c:.17g},{g:.17g}")
    _emit("\n".join(lines), _resolve_output(ns.output))
    summary = {"area": area, "gini": gini}
    if ns.output is not None:
        sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
    return 0


def _cmd_simulate(ns) -> int:
    stream = SeededStream(ns.seed, ns.stream)
    cfg = _quad_config(ns)
    if ns.system is not None:
        if ns.marginal is None:
            raise ValueError("--marginal is required with --system")
        if ns.copula is not None or ns.marginal_x or ns.marginal_y:
            raise ValueError("--system mode does not accept pair-model flags")
        catalog = {spec.id: spec for spec in load_catalog()}
        if ns.system not in catalog:
            raise ValueError(f"unknown system id {ns.system}; catalog has 1..28")
        spec = catalog[ns.system]
        marginal = parse_marginal(ns.marginal)
        estimate = empirical_efficiency(spec, ns.samples, stream, marginal=marginal)
        payload = {
            "mode": "system",
            "system_id": spec.id,
            "system_name": spec.name,
            "n": ns.samples,
            "seed": ns.seed,
            "stream_id": ns.stream,
            "efficiency_hat": estimate,
            "analytic": eff_gini(spec, marginal, config=cfg),
        }
    else:
        if ns.copula is None or not ns.marginal_x or not ns.marginal_y:
            raise ValueError(
                "simulate needs either --system/--marginal or "
                "--copula/--marginal-x/--marginal-y"
            )
        model = BivariateModel(
            copula=build_copula(ns.copula, ns.theta),
            marginal_x=parse_marginal(ns.marginal_x),
            marginal_y=parse_marginal(ns.marginal_y),
            orientation=_ORIENTATION[ns.orientation],
        )
        sample = sample_pairs(model, ns.samples, stream)
        if ns.samples_out is not None:
            out = _resolve_output(ns.samples_out)
            out.parent.mkdir(parents=True, exist_ok=True)
            sample.to_csv(out)
        gmd_hat, gini_hat = empirical_indices(sample)
        analytic = gmd_bivariate(model, "sf", cfg)
        if not analytic.diagnostics.get("converged", False):
            sys.stderr.write(
                "error: quadrature did not converge within the panel budget\n"
            )
            return 3
        payload = {
            "mode": "pairs",
            "n": ns.samples,
            "seed": ns.seed,
            "stream_id": ns.stream,
            "gmd_hat": gmd_hat,
            "gini_hat": gini_hat,
            "analytic_gmd": analytic.gmd,
            "analytic_gini": analytic.gini,
        }
    _emit(json.dumps(payload, indent=2, sort_keys=True), _resolve_output(ns.output))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="copulagini",
        description="Gini mean differences and efficiency indices for "
                    "dependent lifetimes",
    )
    parser.add_argument("--config", default=None,
                        help="TOML file with default values for the "
                             "subcommand's flags (explicit flags win)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    registry = {}

    biv = subparsers.add_parser("bivariate", help="bivariate index report")
    biv.add_argument("--copula", required=True, choices=_COPULA_CHOICES)
    biv.add_argument("--theta", type=float, default=None)
    biv.add_argument("--marginal-x", required=True)
    biv.add_argument("--marginal-y", required=True)
    biv.add_argument("--orientation", choices=("cdf", "survival"), default="cdf")
    biv.add_argument("--form", choices=("sf", "cdf"), default="sf")
    _add_quadrature_flags(biv)
    _add_output_flags(biv)
    biv.set_defaults(handler=_cmd_bivariate)
    registry["bivariate"] = biv

    multi = subparsers.add_parser("multivariate",
                                  help="identically distributed n-variate report")
    multi.add_argument("--iid", required=True,
                       help="common marginal spec, e.g. uniform:0,1")
    multi.add_argument("--n", type=int, required=True)
    _add_quadrature_flags(multi)
    _add_output_flags(multi)
    multi.set_defaults(handler=_cmd_multivariate)
    registry["multivariate"] = multi

    tab = subparsers.add_parser("tables", help="28-system efficiency tables")
    tab.add_argument("--which", type=int, choices=(1, 2), required=True)
    tab.add_argument("--theta", type=float, default=None)
    _add_quadrature_flags(tab)
    _add_output_flags(tab, formats=("csv", "json"))
    tab.set_defaults(handler=_cmd_tables)
    registry["tables"] = tab

    fig = subparsers.add_parser("figure-data",
                                help="diagonal-section curves and areas")
    fig.add_argument("--copula", required=True, choices=_COPULA_CHOICES)
    fig.add_argument("--theta", type=float, default=None)
    fig.add_argument("--marginal", choices=("uniform", "exponential"),
                     required=True)
    fig.add_argument("--points", type=int, default=200)
    _add_quadrature_flags(fig)
    _add_output_flags(fig, formats=("csv",))
    fig.set_defaults(handler=_cmd_figure_data)
    registry["figure-data"] = fig

    sim = subparsers.add_parser("simulate", help="seeded Monte Carlo estimates")
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--stream", type=int, default=0)
    sim.add_argument("--samples", type=int, required=True)
    sim.add_argument("--copula", choices=_COPULA_CHOICES, default=None)
    sim.add_argument("--theta", type=float, default=None)
    sim.add_argument("--marginal-x", default=None)
    sim.add_argument("--marginal-y", default=None)
    sim.add_argument("--orientation", choices=("cdf", "survival"), default="cdf")
    sim.add_argument("--system", type=int, default=None,
                     help="catalog system id for efficiency estimation")
    sim.add_argument("--marginal", default=None,
                     help="i.i.d. component marginal for --system mode")
    sim.add_argument("--samples-out", default=None,
                     help="write the sampled pairs as CSV")
    _add_quadrature_flags(sim)
    _add_output_flags(sim)
    sim.set_defaults(handler=_cmd_simulate)
    registry["simulate"] = sim

    # accepted before or after the subcommand; read by the pre-parse probe
    for sub in registry.values():
        sub.add_argument("--config", default=None,
                         help="TOML file with default flag values")

    return parser, registry


def _apply_config_file(argv, registry) -> None:
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", default=None)
    known, _ = probe.parse_known_args(argv)
    if known.config is None:
        return
    with open(known.config, "rb") as fh:
        data = tomllib.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must contain a table of flag defaults")
    shared = {k: v for k, v in data.items() if not isinstance(v, dict)}
    for key, value in data.items():
        if isinstance(value, dict) and key not in registry:
            raise ValueError(f"config section [{key}] matches no subcommand")
    for name, sub in registry.items():
        merged = dict(shared)
        merged.update(data.get(name, {}))
        actions = {action.dest: action for action in sub._actions}
        defaults = {}
        for key, value in merged.items():
            dest = str(key).replace("-", "_")
            if dest in actions:
                defaults[dest] = value
                # a config-supplied value satisfies a mandatory flag
                actions[dest].required = False
        if defaults:
            sub.set_defaults(**defaults)


def main(argv=None) -> int:
    args = list(sys.argv[1:]) if argv is None else list(argv)
    parser, registry = build_parser()
    try:
        _apply_config_file(args, registry)
    except (OSError, ValueError, tomllib.TOMLDecodeError) as exc:
        sys.stderr.write(f"error: cannot load config: {exc}\n")
        return 2
    try:
        ns = parser.parse_args(args)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return 0 if code == 0 else 2
    try:
        return ns.handler(ns)
    except (NonConvergenceError, IntegrandEvaluationError) as exc:
        sys.stderr.write(f"error: numerical failure: {exc}\n")
        return 3
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
