"""Command-line front end: ``pgtlab <subcommand> ...``.

Exit codes: 0 success, 2 validation failure, 3 incomplete data.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import io as pio
from .chebyshev import counting_table, parse_grid, psi0
from .core import (IncompleteDataError, ManifoldParams, ValidationError, as_fraction,
                   validate_catalog)
from .experiments import COMPARE_COLUMNS, MODES, fit_exponent, pgt_compare
from .explicit import explicit_psi_j, explicit_psi_nminus1, main_term, weyl_sample
from .gallagher import (DEFAULT_EPSILON, DEFAULT_GRID, converge_check, critical_remainder,
                        exceptional_report, solve_plan)
from .spectrum import brute_force_spectrum, enumerate_spectrum

EXIT_VALIDATION = 2
EXIT_INCOMPLETE = 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_with_manifest(rows, columns, man: dict) -> str:
    return f"# manifest: {json.dumps(man, sort_keys=True)}\n" + pio.rows_to_csv(rows, columns)


def _params(args) -> ManifoldParams:
    return ManifoldParams(args.n, as_fraction(args.rho))


def _points(args) -> list[float]:
    if args.grid:
        return [float(x) for x in parse_grid(args.grid)]
    if args.x is None:
        raise ValidationError("give --x or --grid")
    return [args.x]


def _load_spectrum(args):
    if args.spectrum:
        return pio.read_spectrum(args.spectrum)
    if args.norm_bound:
        return enumerate_spectrum(args.norm_bound, args.threads)
    raise ValidationError("give --spectrum FILE or --norm-bound")


def _load_catalog(path: str):
    catalog = pio.read_catalog(path)
    problems = validate_catalog(catalog)
    if problems:
        raise ValidationError("catalog invalid:\n  " + "\n  ".join(problems))
    return catalog


def _rational(q: Fraction) -> dict:
    return {"exact": pio.format_fraction(q), "decimal": float(q)}


# -- subcommands -------------------------------------------------------------------

def cmd_enumerate(args) -> None:
    if args.entry_bound:
        spec = brute_force_spectrum(args.norm_bound, args.entry_bound)
    else:
        spec = enumerate_spectrum(args.norm_bound, args.threads)
    _emit(pio.spectrum_to_csv(spec), args.out)


def cmd_psi(args) -> None:
    spec = _load_spectrum(args)
    rows = counting_table(spec, _points(args), args.j)
    man = pio.manifest({"spectrum": args.spectrum}, {"j": args.j, "norm_bound": spec.norm_bound},
                       grid=args.grid)
    _emit(_csv_with_manifest(rows, ["x", "psi0", "psi_j", "pi_gamma"], man), args.out)


def cmd_explicit(args) -> None:
    catalog = _load_catalog(args.catalog)
    rows = []
    if args.theorem4:
        if not args.config:
            raise ValidationError("--theorem4 needs --config FILE")
        config = pio.read_config(args.config)
        for x in _points(args):
            value, bound = explicit_psi_nminus1(catalog, config, x)
            rows.append({"x": x, "value": value, "reported_bound": bound})
    else:
        if args.j is None:
            raise ValidationError("--j is required without --theorem4")
        for x in _points(args):
            rows.append({"x": x, "value": explicit_psi_j(catalog, x, args.j, args.w_height),
                         "reported_bound": 0.0})
    man = pio.manifest({"catalog": args.catalog, "config": args.config},
                       {"j": args.j, "theorem4": args.theorem4, "w_height": args.w_height},
                       grid=args.grid)
    _emit(_csv_with_manifest(rows, ["x", "value", "reported_bound"], man), args.out)


def cmd_plan(args) -> None:
    params = _params(args)
    plan = solve_plan(params, args.j, args.epsilon)
    out = {
        "n": params.n, "rho": pio.format_fraction(params.rho), "j": plan.j,
        "epsilon": plan.epsilon, "label": plan.label,
        "gamma": _rational(plan.gamma_exp), "beta": _rational(plan.beta),
        "d_exponents": [_rational(q) for q in plan.d_exponents],
        "y_exponents": [_rational(q) for q in plan.y_exponents],
        "psi0_x_exponent": _rational(plan.psi0_x_exponent),
        "psi0_log_exponent": _rational(plan.psi0_log_exponent),
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)


def cmd_gallagher_run(args) -> None:
    params = _params(args)
    plan = solve_plan(params, args.j, args.epsilon)
    inputs = {}
    if args.source == "catalog":
        if not args.catalog:
            raise ValidationError("--source catalog needs --catalog FILE")
        catalog = _load_catalog(args.catalog)
        if catalog.params != params:
            raise ValidationError("catalog parameters differ from --n/--rho")
        inputs["catalog"] = args.catalog
        remainder = lambda x: critical_remainder(catalog, plan, x, args.w_height)  # noqa: E731
        level = "psi_j"
    else:
        spec = _load_spectrum(args)
        inputs["spectrum"] = args.spectrum
        if math.exp(args.i_max + 1) > spec.norm_bound:
            raise IncompleteDataError(
                f"e^{args.i_max + 1} exceeds the spectrum bound {spec.norm_bound}")
        remainder = lambda x: psi0(spec, x) - main_term(params, x)  # noqa: E731
        level = "psi_0"
    report = exceptional_report(remainder, plan, params, range(args.i_min, args.i_max + 1),
                                args.grid, level)
    finite, rate = converge_check(report) if len(report.intervals) >= 5 else (None, None)
    out = {
        "intervals": [{"i": i, "exceed_measure": m} for i, m in report.intervals],
        "total_measure": report.total_measure,
        "epsilon": report.epsilon,
        "level": level,
        "converge_check": {"finite_trend": finite,
                           "fitted_rate": None if rate is None or math.isinf(rate) else rate},
        "provenance": pio.manifest(inputs, {"n": params.n, "rho": pio.format_fraction(params.rho),
                                            "j": args.j, "epsilon": args.epsilon,
                                            "w_height": args.w_height, "source": args.source},
                                   grid={"i_min": args.i_min, "i_max": args.i_max,
                                         "density": args.grid}),
    }
    _emit(json.dumps(out, indent=2) + "\n", args.out)


def cmd_synth(args) -> None:
    params = _params(args)
    catalog = weyl_sample(params, args.c1, args.height)
    _emit(json.dumps(pio.catalog_to_dict(catalog)) + "\n", args.out)


def cmd_pgt_compare(args) -> None:
    params = _params(args)
    spec = _load_spectrum(args)
    catalog = _load_catalog(args.catalog) if args.catalog else None
    xs = [float(x) for x in parse_grid(args.grid)] if args.grid else []
    rows = pgt_compare(spec, params, args.mode, args.j, xs, catalog, args.epsilon)
    man = pio.manifest({"spectrum": args.spectrum, "catalog": args.catalog},
                       {"n": params.n, "rho": pio.format_fraction(params.rho), "j": args.j,
                        "mode": args.mode, "epsilon": args.epsilon,
                        "norm_bound": spec.norm_bound}, grid=args.grid)
    _emit(_csv_with_manifest(rows, COMPARE_COLUMNS, man), args.out)


def cmd_fit(args) -> None:
    lines = [ln for ln in Path(args.series).read_text().splitlines() if ln and not ln.startswith("#")]
    try:
        series = [(float(r[args.x_column]), float(r[args.column])) for r in csv.DictReader(lines)]
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"cannot read series columns: {exc!r}") from exc
    try:
        slope, stderr = fit_exponent(series)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    _emit(json.dumps({"slope": slope, "stderr": stderr, "points": len(series)}) + "\n", args.out)


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgtlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, params=False, points=False, spectrum=False):
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--threads", type=int, default=1, help="worker processes (1 = reproducible)")
        if params:
            p.add_argument("--n", type=int, default=2)
            p.add_argument("--rho", default="1/2", help="rational as P/Q")
        if points:
            p.add_argument("--x", type=float)
            p.add_argument("--grid", help='geometric grid "x0:r:count"')
        if spectrum:
            p.add_argument("--spectrum", help="spectrum CSV file")
            p.add_argument("--norm-bound", type=float, help="enumerate the modular spectrum instead")

    p = sub.add_parser("enumerate", help="modular-surface length spectrum as CSV")
    common(p)
    p.add_argument("--norm-bound", type=float, required=True)
    p.add_argument("--entry-bound", type=int, help="use the brute-force matrix oracle instead")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("psi", help="psi0, psi_j and pi_Gamma of a spectrum")
    common(p, points=True, spectrum=True)
    p.add_argument("--j", type=int, default=1)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("explicit", help="explicit formula over a singularity catalog")
    common(p, points=True)
    p.add_argument("--catalog", required=True)
    p.add_argument("--j", type=int)
    p.add_argument("--w-height", type=float, help="truncate critical sum at this height")
    p.add_argument("--theorem4", action="store_true", help="conditional psi_{n-1} formula")
    p.add_argument("--config", help="conditional-formula config JSON")
    p.set_defaults(func=cmd_explicit)

    p = sub.add_parser("plan", help="exact smoothing exponents")
    common(p, params=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("gallagher-run", help="exceptional-set measures as JSON")
    common(p, params=True, spectrum=True)
    p.add_argument("--source", choices=["spectrum", "catalog"], required=True)
    p.add_argument("--catalog")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--i-min", type=int, required=True)
    p.add_argument("--i-max", type=int, required=True)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="points per interval")
    p.add_argument("--w-height", type=float, help="upper split height W (default: catalog height)")
    p.set_defaults(func=cmd_gallagher_run)

    p = sub.add_parser("synth", help="synthetic Weyl-law catalog as JSON")
    common(p, params=True)
    p.add_argument("--c1", type=float, default=1.0, help="Weyl constant")
    p.add_argument("--height", type=float, required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pgt-compare", help="pi_Gamma against the li-sum")
    common(p, params=True, spectrum=True)
    p.add_argument("--grid", help='geometric grid "x0:r:count"')
    p.add_argument("--catalog")
    p.add_argument("--mode", choices=MODES, default="unconditional")
    p.add_argument("--j", type=int, default=2)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.set_defaults(func=cmd_pgt_compare)

    p = sub.add_parser("fit", help="log-log slope of a remainder series")
    common(p)
    p.add_argument("--series", required=True, help="CSV with x and remainder columns")
    p.add_argument("--x-column", default="x")
    p.add_argument("--column", default="remainder")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except IncompleteDataError as exc:
        print(f"incomplete data: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except (ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
