"""Command-line front end: ``srheat <subcommand> [options]``."""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .. import __version__, acceptance, heatnum, heisenberg, opalg, symcalc

SCHEMA = "1"
GEOMETRIES = ("interval", "disk", "heisenberg-plane")


class CliError(Exception):
    """A user-facing failure; reported as JSON with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(f"usage: {message}")


def _common(p: argparse.ArgumentParser, formats=("json", "text")):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", type=Path, help="write the result here instead of stdout")
    p.add_argument("--force", action="store_true", help="allow overwriting --out")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")


def _geometry_args(p: argparse.ArgumentParser, default="disk"):
    p.add_argument("--geometry", choices=GEOMETRIES, default=default)
    p.add_argument("--R", default="1", help="disk radius (rational, e.g. 3/2)")
    p.add_argument("--L", default="1", help="interval length (rational)")
    p.add_argument("--trunc", type=int, default=symcalc.DEFAULT_TRUNC,
                   help="z-truncation for the Heisenberg plane")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="srheat", description=__doc__)
    parser.add_argument("--version", action="version", version=f"srheat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dk", help="print D_k and D_k(1)")
    p.add_argument("--k", type=int, required=True)
    _common(p)

    p = sub.add_parser("integrand", help="boundary integrand and coefficient a_k")
    p.add_argument("--k", type=int, required=True)
    _geometry_args(p)
    _common(p)

    p = sub.add_parser("distance", help="distance from the plane z = 0 in H")
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.add_argument("z", type=float)
    p.add_argument("--tol", type=float, default=heisenberg.RESIDUAL_TOL)
    _common(p)

    p = sub.add_parser("distance-grid", help="sample the distance on a grid (CSV)")
    for axis in ("x", "y", "z"):
        p.add_argument(f"--{axis}", required=True, help="start:stop:num or a single value")
    p.add_argument("--tol", type=float, default=heisenberg.RESIDUAL_TOL)
    _common(p, ("csv", "json"))

    p = sub.add_parser("heatfit", help="numeric Q(t), half-power fit and exact a_k")
    p.add_argument("--geometry", choices=("interval", "disk"), default="disk")
    p.add_argument("--R", default="1")
    p.add_argument("--L", default="1")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--samples", type=int, default=12)
    p.add_argument("--n-r", type=int, default=1000)
    p.add_argument("--n-t", type=int, default=48)
    p.add_argument("--method", choices=("auto", "peel", "lstsq"), default="auto")
    p.add_argument("--tol", type=float, default=1e-2, help="relative tolerance for the table flags")
    _common(p, ("json", "text", "csv"))

    p = sub.add_parser("blowup", help="annulus integrals of the a_5 and a_3 integrands")
    p.add_argument("--r-min", type=float, required=True)
    p.add_argument("--r-max", type=float, required=True)
    p.add_argument("--trunc", type=int, default=symcalc.DEFAULT_TRUNC)
    _common(p)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    _common(p, ("text", "json"))
    return parser


def _rational(text: str, name: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"{name} must be a rational number, got {text!r}") from exc
    if value <= 0:
        raise CliError(f"{name} must be positive")
    return value


def _context(args) -> symcalc.EvalContext:
    if args.geometry == "interval":
        return symcalc.IntervalContext(_rational(args.L, "--L"))
    if args.geometry == "disk":
        return symcalc.DiskContext(_rational(args.R, "--R"))
    return symcalc.HeisenbergPlaneContext(args.trunc)


def _k_at_least(k: int, low: int):
    if k < low:
        raise CliError(f"--k must be at least {low}")


def cmd_dk(args) -> dict:
    _k_at_least(args.k, 1)
    d = opalg.d_operator(args.k)
    rd = opalg.reduced_d(args.k)
    return {"k": args.k, "operator": opalg.serialize(d), "terms": d.to_json(),
            "applied_to_one": str(rd), "reduced": rd.to_json()}


def cmd_integrand(args) -> dict:
    _k_at_least(args.k, 0)
    ctx = _context(args)
    out: Dict[str, object] = {"k": args.k, "context": ctx.describe()}
    if args.k == 0:
        if args.geometry == "heisenberg-plane":
            raise CliError("a_0 is the (infinite) volume for the Heisenberg plane")
        out["coefficient"] = symcalc.coefficient(ctx, 0).to_json()
        return out
    d1 = symcalc.integrand(ctx, args.k)
    integ = -d1
    out["d_k_of_one"] = d1.to_json()
    out["integrand"] = integ.to_json()
    out["integrand_text"] = str(integ)
    if args.geometry == "heisenberg-plane":
        out["monomial"] = integ.is_monomial()
        if args.k in (3, 5):
            cmp = acceptance.heisenberg_comparison(args.trunc)[f"a{args.k}"]
            out["reference_comparison"] = cmp
    else:
        out["coefficient"] = symcalc.coefficient(ctx, args.k).to_json()
    return out


def cmd_distance(args) -> dict:
    res = heisenberg.distance_to_plane(heisenberg.Point(args.x, args.y, args.z), args.tol)
    foot = None
    if res.foot is not None:
        foot = {"x0": res.foot.x0, "y0": res.foot.y0, "time": res.foot.time,
                "branch_k": res.foot.branch_k}
    return {"point": [args.x, args.y, args.z], "delta": res.value,
            "on_axis": res.on_axis, "foot": foot}


def cmd_distance_grid(args):
    try:
        spec = heisenberg.GridSpec(*(heisenberg.Axis.parse(getattr(args, a)) for a in "xyz"))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    rows = heisenberg.sample_grid(spec, args.tol)
    if args.format == "csv":
        return heisenberg.rows_to_csv(rows)
    return {"columns": list(heisenberg.CSV_COLUMNS), "count": len(rows),
            "rows": [list(r) for r in rows]}


def _exact_coefficients(args, m: int) -> List[Optional[opalg.SqrtPiCoefficient]]:
    if args.geometry == "interval":
        ctx = symcalc.IntervalContext(_rational(args.L, "--L"))
    else:
        ctx = symcalc.DiskContext(_rational(args.R, "--R"))
    return [symcalc.coefficient(ctx, k) for k in range(m + 1)]


def cmd_heatfit(args):
    if args.geometry == "interval":
        L = float(_rational(args.L, "--L"))
        times = heatnum.default_times(L, args.samples)
        samples = heatnum.interval_samples(L, times)
    else:
        R = float(_rational(args.R, "--R"))
        times = heatnum.default_times(R, args.samples)
        samples = heatnum.disk_heat_content(R, times, grid=(args.n_r, args.n_t))
    if args.format == "csv":
        return samples.to_csv()
    fit = heatnum.fit_halfpowers(samples, args.m, method=args.method)
    exact = _exact_coefficients(args, args.m)
    table = []
    for k, (got, want) in enumerate(zip(fit.coefficients, exact)):
        w = float(want)
        err = abs(got - w)
        rel = err / abs(w) if w else None
        table.append({"k": k, "fitted": got, "exact": want.to_json(), "abs_error": err,
                      "rel_error": rel,
                      "within_tol": (rel if rel is not None else err) <= args.tol})
    if args.format == "text":
        lines = [f"{args.geometry}: m = {fit.m}, method {fit.method}, "
                 f"residual {fit.residual:.3e}, condition {fit.condition:.3e}",
                 f"{'k':>2} {'fitted':>22} {'exact':>22} {'rel error':>11}  ok"]
        for row in table:
            rel = "-" if row["rel_error"] is None else f"{row['rel_error']:.2e}"
            lines.append(f"{row['k']:>2} {row['fitted']:>22.15g} {row['exact']['float']:>22.15g}"
                         f" {rel:>11}  {'yes' if row['within_tol'] else 'no'}")
        return "\n".join(lines) + "\n"
    return {"samples": samples.to_json(), "fit": fit.to_json(), "table": table}


def cmd_blowup(args) -> dict:
    if not 0 < args.r_min <= args.r_max:
        raise CliError("need 0 < --r-min <= --r-max")
    ctx = symcalc.HeisenbergPlaneContext(args.trunc)
    a5 = -symcalc.integrand(ctx, 5)
    a3 = -symcalc.integrand(ctx, 3)
    reference3 = symcalc.BoundaryIntegrand("heisenberg-plane", {-2: acceptance.REFERENCE_A3})
    out = {"r_min": args.r_min, "r_max": args.r_max}
    for name, integ in (("a5", a5), ("a3", a3), ("a3_reference", reference3)):
        out[name] = {
            "integrand": integ.to_json(),
            "integral": heisenberg.blowup_integral(args.r_min, args.r_max, integ),
            "integral_half_r_min": heisenberg.blowup_integral(args.r_min / 2, args.r_max, integ),
            "integrable_at_origin": (integ.is_zero()
                                     or heisenberg.converges_at_origin(integ.power())),
        }
    return out


def _monomial(coeff: dict, power) -> str:
    if power is None:
        return "0"
    return f"({coeff['q']}) pi^({coeff['pi_half_power']}/2) r^{power}"


def cmd_selftest(args):
    results = acceptance.run_all()
    passed = all(r.passed for r in results)
    if args.format == "text":
        lines = [r.line() for r in results]
        cmp = acceptance.heisenberg_comparison()
        for key, c in cmp.items():
            lines.append(f"   {key} integrand: computed {_monomial(c['computed'], c['computed_power'])}"
                         f", reference {_monomial(c['reference'], c['reference_power'])}"
                         f"  {'match' if c['match'] else 'DISCREPANCY'}")
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
        return "\n".join(lines) + "\n", passed
    return {"passed": passed,
            "checks": [{"number": r.number, "name": r.name, "passed": r.passed,
                        "failures": r.failures, "elapsed": r.elapsed, "budget": r.budget,
                        "details": r.details} for r in results]}, passed


COMMANDS: Dict[str, Callable] = {
    "dk": cmd_dk, "integrand": cmd_integrand, "distance": cmd_distance,
    "distance-grid": cmd_distance_grid, "heatfit": cmd_heatfit, "blowup": cmd_blowup,
    "selftest": cmd_selftest,
}


def _config(args) -> dict:
    skip = {"out", "force", "no_timestamp"}
    return {k: (str(v) if isinstance(v, Path) else v)
            for k, v in sorted(vars(args).items()) if k not in skip}


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _text(result) -> str:
    if isinstance(result, str):
        return result
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}{k}.", v)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            for i, v in enumerate(value):
                walk(f"{prefix}{i}.", v)
        else:
            lines.append(f"{prefix[:-1]}: {value}")

    walk("", result)
    return "\n".join(lines) + "\n"


def render(args, result) -> str:
    if isinstance(result, str):
        return result
    if args.format == "json":
        doc = {"schema": SCHEMA, "command": args.command, "version": __version__,
               "config": _config(args), "result": result}
        if not args.no_timestamp:
            doc["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"
    return _text(result)


def _emit(text: str, out: Optional[Path], force: bool):
    if out is None:
        sys.stdout.write(text)
        return
    if out.exists() and not force:
        raise CliError(f"{out} exists; pass --force to overwrite")
    out.write_text(text)


def _error_json(exc: BaseException) -> str:
    return json.dumps({"schema": SCHEMA, "error": {"type": type(exc).__name__,
                                                   "message": str(exc)}},
                      sort_keys=True) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        outcome = COMMANDS[args.command](args)
        ok = True
        if args.command == "selftest":
            outcome, ok = outcome
        _emit(render(args, outcome), args.out, args.force)
        return 0 if ok else 1
    except (CliError, ValueError, ArithmeticError, RuntimeError) as exc:
        sys.stdout.write(_error_json(exc))
        return 2 if isinstance(exc, CliError) and str(exc).startswith("usage:") else 1


if __name__ == "__main__":
    sys.exit(main())
