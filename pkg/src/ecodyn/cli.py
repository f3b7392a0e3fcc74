"""Command-line front end.

Subcommands map one-to-one onto the model modules: ``wage``, ``value``
and ``budget`` evaluate a single configuration from a JSON file,
``sweep`` grids one or two parameters, and ``verify`` runs the built-in
numerical audit. Data rows go to stdout (or --out) as CSV or JSON;
human-oriented summaries go to stderr so pipelines stay clean. The one
exception is ``verify``, whose pass/fail lines are its data product and
therefore print to stdout.

Exit codes: 0 success, 1 configuration or usage error, 2 model domain
error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Any, IO

from . import __version__, audit
from . import budget_dynamics as bd
from . import value_feedback as vf
from . import wage_profit as wp
from .errors import DomainError, EcodynError, InvariantViolation
from .oracles import IntegrationSpec, rk4_integrate
from .sweep import BINDINGS, Axis, ParamGrid, stability_region, sweep

_MISSING = object()


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise InvariantViolation(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvariantViolation(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InvariantViolation(f"config {path!r} must hold a JSON object")
    return cfg


def _section(cfg: dict[str, Any], name: str) -> dict[str, Any]:
    if name not in cfg:
        raise InvariantViolation(f"config has no {name!r} section")
    section = cfg[name]
    if not isinstance(section, dict):
        raise InvariantViolation(f"config section {name!r} must be an object")
    return section


def _num(section: dict[str, Any], key: str, default: Any = _MISSING) -> float:
    if key not in section:
        if default is _MISSING:
            raise InvariantViolation(f"missing numeric key {key!r}")
        return default
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InvariantViolation(f"key {key!r} must be a number, got {v!r}")
    return float(v)


def _int(section: dict[str, Any], key: str, default: Any = _MISSING) -> int:
    if key not in section:
        if default is _MISSING:
            raise InvariantViolation(f"missing integer key {key!r}")
        return default
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvariantViolation(f"key {key!r} must be an integer, got {v!r}")
    return v


def _grid_values(section: dict[str, Any], key: str = "grid") -> list[float]:
    spec = section.get(key)
    if not isinstance(spec, dict):
        raise InvariantViolation(f"section needs a {key!r} object with min/max/points")
    axis = Axis("grid", _num(spec, "min"), _num(spec, "max"), _int(spec, "points"))
    return axis.grid()


def _csv_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(columns: list[str], rows: list[dict[str, Any]], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c)) for c in columns])


def _write_json(
    rows: list[dict[str, Any]], metadata: dict[str, Any], stream: IO[str]
) -> None:
    json.dump({"metadata": metadata, "rows": rows}, stream, indent=2)
    stream.write("\n")


def _emit(
    columns: list[str],
    rows: list[dict[str, Any]],
    metadata: dict[str, Any],
    fmt: str,
    out: str | None,
) -> None:
    if out is None:
        if fmt == "csv":
            _write_csv(columns, rows, sys.stdout)
        else:
            _write_json(rows, metadata, sys.stdout)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        if fmt == "csv":
            _write_csv(columns, rows, fh)
        else:
            _write_json(rows, metadata, fh)


def _output_options(args: argparse.Namespace, cfg: dict[str, Any]) -> tuple[str, str | None]:
    out_cfg = cfg.get("output", {})
    if not isinstance(out_cfg, dict):
        raise InvariantViolation("config section 'output' must be an object")
    fmt = args.format or out_cfg.get("format") or "csv"
    if fmt not in ("csv", "json"):
        raise InvariantViolation(f"output format must be csv or json, got {fmt!r}")
    out = args.out or out_cfg.get("path")
    return fmt, out


def _run_wage(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    sec = _section(cfg, "wage")
    fmt, out = _output_options(args, cfg)
    factors = sec.get("other_factors", [])
    if not isinstance(factors, list):
        raise InvariantViolation("'other_factors' must be a list of [weight, value] pairs")
    cs = wp.CostStructure(
        _num(sec, "max_market_price"),
        _num(sec, "labor_weight"),
        tuple((pair[0], pair[1]) for pair in factors),
    )
    wages = _grid_values(sec) if "grid" in sec else []

    _say(f"gross margin: {wp.gross_margin(cs)!r}")
    sign_at: float | None = wages[0] if wages else None
    if "floor" in sec:
        best = wp.optimal_wage(cs, wp.WageBound(_num(sec, "floor")))
        if isinstance(best, wp.UnboundedProfit):
            _say(
                "optimal wage: unbounded (no wage floor; net profit per unit "
                "diverges as the wage approaches zero)"
            )
        else:
            _say(f"optimal wage: {best.wage!r}, net profit {best.net_profit!r}")
            sign_at = best.wage
    if sign_at is not None:
        d1, d2 = wp.profit_derivatives(cs, sign_at)

        def describe(d: float) -> str:
            return "negative" if d < 0 else "zero" if d == 0 else "positive"

        _say(
            f"derivatives at wage {sign_at!r}: first {d1!r} ({describe(d1)}), "
            f"second {d2!r} ({describe(d2)})"
        )

    if "grid" in sec:
        rows = []
        for point in wp.profit_curve(cs, wages):
            d1, d2 = wp.profit_derivatives(cs, point.wage)
            rows.append(
                {
                    "wage": point.wage,
                    "net_profit": point.net_profit,
                    "first_derivative": d1,
                    "second_derivative": d2,
                }
            )
        columns = ["wage", "net_profit", "first_derivative", "second_derivative"]
        metadata = {"command": "wage", "rows": len(rows)}
        _emit(columns, rows, metadata, fmt, out)
    return 0


def _value_exponent(sec: dict[str, Any]) -> float | vf.BalancedFeedback:
    has_gains = "inflation_gain" in sec or "deflation_gain" in sec
    if has_gains and "exponent" in sec:
        raise InvariantViolation(
            "give either 'exponent' or the gain pair, not both"
        )
    if has_gains:
        gains = vf.FeedbackGains(
            _num(sec, "inflation_gain"), _num(sec, "deflation_gain")
        )
        return vf.exponent_from_gains(gains)
    return _num(sec, "exponent")


def _run_value(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    sec = _section(cfg, "value")
    fmt, out = _output_options(args, cfg)

    if "probe" in sec:
        if "grid" in sec:
            raise InvariantViolation("give either 'probe' or 'grid', not both")
        probe_sec = sec["probe"]
        if not isinstance(probe_sec, dict):
            raise InvariantViolation("'probe' must be an object")
        exponents = probe_sec.get("exponents")
        if not isinstance(exponents, list) or not exponents:
            raise InvariantViolation("'probe' needs a non-empty 'exponents' list")
        result = vf.limit_probe(
            _num(probe_sec, "true_value"), [float(b) for b in exponents]
        )
        _say(
            "probe regime: "
            + ("divergent (true value below 1)" if result.divergent else "convergent")
        )
        rows = [{"exponent": b, "gap": g} for b, g in result.points]
        metadata = {
            "command": "value",
            "kind": "probe",
            "divergent": result.divergent,
            "rows": len(rows),
        }
        _emit(["exponent", "gap"], rows, metadata, fmt, out)
        return 0

    exponent = _value_exponent(sec)
    xs = _grid_values(sec)
    steps = _int(sec, "rk4_steps", 1000)
    if steps < 1:
        raise InvariantViolation(f"'rk4_steps' must be >= 1, got {steps}")

    rows = []
    if isinstance(exponent, vf.BalancedFeedback):
        _say(
            "balanced feedback: the adjustment costs cancel, market value "
            "equals true value"
        )
        for x in xs:
            rows.append({"true_value": x, "market_value": x, "rk4_error": 0.0})
        meta_exponent: Any = None
    else:
        if exponent == 1:
            coeff = _num(sec, "homog_coeff", 1.0)
            _say("exponent 1: using the logarithmic closed form")

            def value_at(x: float) -> float:
                return vf.singular_market_value(coeff, x)

        else:
            if "homog_coeff" in sec:
                sol = vf.MarketValueSolution(exponent, _num(sec, "homog_coeff"))
            else:
                sol = vf.MarketValueSolution.with_default_coeff(exponent)

            def value_at(x: float) -> float:
                return vf.analytic_market_value(sol, x)

        anchor = xs[0]
        y0 = value_at(anchor)
        for x in xs:
            y = value_at(x)
            if x == anchor:
                err = 0.0
            else:
                spec = IntegrationSpec(
                    anchor, x, steps, lambda t, u: vf.ode_rhs(exponent, t, u)
                )
                err = abs(rk4_integrate(spec, y0) - y) / max(1.0, abs(y))
            rows.append({"true_value": x, "market_value": y, "rk4_error": err})
        meta_exponent = exponent

    metadata = {
        "command": "value",
        "kind": "curve",
        "exponent": meta_exponent,
        "rk4_steps": steps,
        "rows": len(rows),
    }
    _emit(["true_value", "market_value", "rk4_error"], rows, metadata, fmt, out)
    return 0


def _deficiencies(sec: dict[str, Any]) -> bd.DeficiencyFactors | None:
    d = sec.get("deficiencies")
    if d is None:
        return None
    if not isinstance(d, dict):
        raise InvariantViolation("'deficiencies' must be an object")
    return bd.DeficiencyFactors(
        tax_collection=_num(d, "tax_collection", 0.0),
        work_effort=_num(d, "work_effort", 0.0),
        spending_efficiency=_num(d, "spending_efficiency", 0.0),
        currency_value=_num(d, "currency_value", 0.0),
    )


def _run_budget(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    sec = _section(cfg, "budget")
    fmt, out = _output_options(args, cfg)
    mode = args.mode or sec.get("mode", "direct")
    horizon = _int(sec, "horizon", 10)
    if horizon < 0:
        raise InvariantViolation(f"'horizon' must be >= 0, got {horizon}")

    params = bd.BudgetParams(
        tax_rate=_num(sec, "tax_rate"),
        spending_split=_num(sec, "spending_split"),
        private_fraction=_num(sec, "private_fraction"),
        invest_share=_num(sec, "invest_share"),
        foreign_multiplier=_num(sec, "foreign_multiplier"),
        gov_spending=_num(sec, "gov_spending"),
        initial_wages=_num(sec, "initial_wages"),
    )
    factors = _deficiencies(sec)
    balance_note = ""
    if factors is not None:
        adjusted = bd.apply_deficiencies(params, factors)
        params = adjusted.as_params(params)
        eroded = adjusted.scale_balance(bd.flow_balance(params))
        balance_note = (
            f" (currency erosion scales the year-0 flow balance to {eroded!r};"
            " the trajectory below uses the adjusted parameters without erosion)"
        )

    report = bd.stability_report(params, mode)
    coeffs = report.coefficients
    _say(f"budget mode: {mode}")
    _say(
        f"coefficients: balance_gain={coeffs.balance_gain!r} "
        f"invest_gain={coeffs.invest_gain!r} constant_flow={coeffs.constant_flow!r}"
    )
    if abs(report.pole) < 1.0:
        pole_status = "stable"
    elif abs(report.pole) == 1.0:
        pole_status = "marginal"
    else:
        pole_status = "unstable"
    _say(f"pole: {report.pole!r} ({pole_status})")
    if isinstance(report.fixed_point, bd.DivergentFixedPoint):
        _say(
            "fixed point: divergent (pole exactly 1 with nonzero constant "
            "flow; the pool drifts linearly)"
        )
    else:
        _say(f"fixed point: {report.fixed_point!r}")
    _say(
        f"year 0: flow balance {bd.flow_balance(params)!r}, investments "
        f"{bd.investments(params)!r}, annual change {bd.annual_change(params)!r}"
        + balance_note
    )
    _say(f"tax leverage: {report.leverage!r}")
    if isinstance(report.stable_tax_range, bd.DegenerateRange):
        _say("stable tax range: degenerate (leverage at or below -1)")
    elif report.stable_tax_range is None:
        _say("stable tax range: empty in this mode")
    else:
        lo, hi = report.stable_tax_range
        _say(
            f"stable tax range: ({lo!r}, {hi!r}); configured rate "
            f"{report.tax_rate!r} inside: {report.tax_in_stable_range}"
        )
    _say(f"shrinking: {report.shrinking}")

    levels = bd.iterate(params, horizon, mode)
    rows = []
    for step, level in enumerate(levels):
        closed = bd.closed_form(params, step, mode)
        rows.append(
            {
                "step": step,
                "iterated": level,
                "closed_form": closed,
                "abs_diff": abs(level - closed),
            }
        )
    max_dev = max((row["abs_diff"] for row in rows), default=0.0)
    _say(f"max |iterated - closed form|: {max_dev!r}")
    metadata = {
        "command": "budget",
        "mode": mode,
        "horizon": horizon,
        "pole": report.pole,
        "stable": report.stable,
        "rows": len(rows),
    }
    _emit(["step", "iterated", "closed_form", "abs_diff"], rows, metadata, fmt, out)
    return 0


def _run_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    sec = _section(cfg, "sweep")
    fmt, out = _output_options(args, cfg)

    model = sec.get("model")
    if model not in BINDINGS:
        raise InvariantViolation(
            f"'model' must be one of {sorted(BINDINGS)}, got {model!r}"
        )
    base = sec.get("base", {})
    if not isinstance(base, dict):
        raise InvariantViolation("'base' must be an object")
    axes_spec = sec.get("axes")
    if not isinstance(axes_spec, list) or not axes_spec:
        raise InvariantViolation("'axes' must be a non-empty list")
    axes = []
    for spec in axes_spec:
        if not isinstance(spec, dict) or "name" not in spec:
            raise InvariantViolation("each axis needs name/min/max/points")
        axes.append(
            Axis(str(spec["name"]), _num(spec, "min"), _num(spec, "max"), _int(spec, "points"))
        )
    grid = ParamGrid(tuple(axes))
    workers = _int(sec, "workers", 1)
    kind = sec.get("kind", "sweep")

    if kind == "stability_region":
        if model != "budget":
            raise InvariantViolation("a stability region requires the budget model")
        result = stability_region(
            base, grid, mode=sec.get("mode", "direct"), workers=workers
        )
        outputs = ("pole", "stable")
    elif kind == "sweep":
        result = sweep(BINDINGS[model], base, grid, workers=workers)
        outputs = BINDINGS[model].outputs
    else:
        raise InvariantViolation(f"'kind' must be sweep or stability_region, got {kind!r}")

    flagged = result.metadata["flagged"]
    if result.records and flagged == len(result.records):
        raise DomainError(
            f"all {flagged} cells were rejected; first cell: "
            f"{result.records[0].note}"
        )
    axis_names = [a.name for a in grid.axes]
    columns = axis_names + list(outputs) + ["flagged"]
    rows = []
    json_rows = []
    for rec in result.records:
        row = {**{n: rec.coords[n] for n in axis_names}, **rec.outputs, "flagged": rec.flagged}
        rows.append(row)
        json_rows.append({**row, "note": rec.note})
    _say(
        f"swept {result.metadata['cells']} cells over {axis_names}; "
        f"{flagged} flagged"
    )
    if fmt == "csv":
        _emit(columns, rows, result.metadata, fmt, out)
    else:
        _emit(columns, json_rows, result.metadata, fmt, out)
    return 0


def _parse_tolerances(pairs: list[str] | None) -> dict[str, float]:
    overrides: dict[str, float] = {}
    for pair in pairs or []:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise InvariantViolation(
                f"--tolerance expects NAME=VALUE, got {pair!r}"
            )
        try:
            overrides[name] = float(value)
        except ValueError as exc:
            raise InvariantViolation(
                f"--tolerance value for {name!r} is not a number: {value!r}"
            ) from exc
    return overrides


def _run_verify(args: argparse.Namespace) -> int:
    if args.list:
        for name, tol, description in audit.list_checks():
            print(f"{name} tolerance={tol!r} :: {description}")
        return 0
    overrides: dict[str, float] = {}
    if args.config is not None:
        cfg = _load_config(args.config)
        ver = cfg.get("verification", {})
        if not isinstance(ver, dict):
            raise InvariantViolation("config section 'verification' must be an object")
        for name, value in ver.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvariantViolation(
                    f"verification tolerance {name!r} must be a number, got {value!r}"
                )
            overrides[name] = float(value)
    overrides.update(_parse_tolerances(args.tolerance))
    report = audit.run_all(overrides)
    for r in report.results:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{status} {r.name} tolerance={r.tolerance!r} "
            f"observed={r.observed!r} :: {r.detail}"
        )
    for note in report.notes:
        print(f"INFO {note.name} :: {note.text}")
    passed = sum(1 for r in report.results if r.passed)
    print(f"{passed}/{len(report.results)} checks passed")
    return 0 if report.all_passed else 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecodyn",
        description=(
            "Feedback models for wage floors, market value tracking, and "
            "government budget stability, with built-in numerical "
            "cross-verification."
        ),
        epilog=(
            "exit codes: 0 success, 1 config/usage error, 2 model domain "
            "error, 3 verification failure"
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="path to a JSON config file")
        p.add_argument(
            "--out",
            default=None,
            help="write data rows to this file (default: stdout)",
        )
        p.add_argument(
            "--format",
            choices=("csv", "json"),
            default=None,
            help="row format (default: csv, or the config's output.format)",
        )

    p_wage = sub.add_parser(
        "wage",
        help="net profit per unit over a wage grid",
        description=(
            "Evaluate the net-profit-per-unit curve on a wage grid. Config "
            "section 'wage' needs max_market_price and labor_weight; "
            "optional other_factors [[weight, value], ...], floor, and grid "
            "{min,max,points}. Without a grid only the stderr report is "
            "produced."
        ),
    )
    add_io(p_wage)

    p_value = sub.add_parser(
        "value",
        help="market value against true value, or the limit probe",
        description=(
            "Evaluate the market-value closed form on a true-value grid, "
            "cross-checked against numerical integration. Config section "
            "'value' needs exponent (or inflation_gain/deflation_gain) plus "
            "grid {min,max,points}; optional homog_coeff and rk4_steps "
            "(default 1000). A 'probe' object {true_value, exponents} "
            "switches to gap sampling."
        ),
    )
    add_io(p_value)

    p_budget = sub.add_parser(
        "budget",
        help="wage pool trajectory and stability analysis",
        description=(
            "Iterate the yearly wage pool recurrence and report stability. "
            "Config section 'budget' needs tax_rate, spending_split, "
            "private_fraction, invest_share, foreign_multiplier, "
            "gov_spending, initial_wages; optional horizon (default 10), "
            "mode, deficiencies {tax_collection, work_effort, "
            "spending_efficiency, currency_value}."
        ),
    )
    add_io(p_budget)
    p_budget.add_argument(
        "--mode",
        choices=bd.MODES,
        default=None,
        help="recurrence convention (default: config mode or direct)",
    )

    p_sweep = sub.add_parser(
        "sweep",
        help="grid a model over one or two parameters",
        description=(
            "Sweep a model over one or two axes. Config section 'sweep' "
            "needs model (wage|value|budget), base parameters, and axes "
            "[{name,min,max,points}, ...]; optional workers (default 1), "
            "kind (sweep|stability_region), mode for budget sweeps. Cells "
            "the model rejects are flagged, not fatal."
        ),
    )
    add_io(p_sweep)

    p_verify = sub.add_parser(
        "verify",
        help="run the built-in numerical audit",
        description=(
            "Re-derive every closed form along an independent numerical "
            "route and compare within named tolerances. One PASS/FAIL line "
            "per check plus INFO notes, on stdout. Tolerance overrides come "
            "from the config's 'verification' section ({check: tolerance}) "
            "and from --tolerance flags, flags winning."
        ),
    )
    p_verify.add_argument(
        "--config",
        default=None,
        help="optional JSON config with a 'verification' section",
    )
    p_verify.add_argument(
        "--tolerance",
        action="append",
        metavar="NAME=VALUE",
        help="override a named check tolerance (repeatable, beats the config)",
    )
    p_verify.add_argument(
        "--list",
        action="store_true",
        help="list checks and default tolerances without running them",
    )

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1

    handlers = {
        "wage": _run_wage,
        "value": _run_value,
        "budget": _run_budget,
        "sweep": _run_sweep,
        "verify": _run_verify,
    }
    try:
        return handlers[args.command](args)
    except InvariantViolation as exc:
        _say(f"error: {exc}")
        return 1
    except EcodynError as exc:
        _say(f"error: {exc}")
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
