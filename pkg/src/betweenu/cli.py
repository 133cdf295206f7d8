"""Batch command-line front end.

Four subcommands, all reading a JSON model description (see
:mod:`betweenu.modelspec` for the schema) and writing machine-readable
results into an output directory:

``repr``        U.csv (grid lotteries and their utilities), u.csv (the
                implicit utility over grid x level grid), summary.json
                (extremes, tolerances, worst fixed-point gap, one-sided
                endpoint limits at the simplex vertices).
``check``       axioms.json with all five axiom reports.
``triangle``    curves.csv and triangle.svg for three-outcome models.
``separation``  separation.json: per-level separating functionals, the
                sample-by-sample audit, and cross-polytope agreement.

CSV layout: lottery components first, then inputs such as the level,
then computed quantities.  Input columns are printed with full
round-trip precision so every row can be recomputed by calling the
matching library operation; computed columns carry 12 significant
digits.  All outputs are byte-deterministic for a fixed model, flags,
and seed.

Exit codes: 0 ok, 1 a property or check failed, 2 input error,
3 numeric failure inside the construction.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .axioms import run_all_checks
from .engine import (
    context_for,
    implicit_utility_many,
    one_sided_limits,
    solve_utility_many,
    utility_fixed_point,
)
from .errors import BetweenuError, Infeasible
from .modelspec import load_model
from .separation import contour_samples, cross_polytope_consistency, separate, verify_separation
from .simplex import Polytope, degenerate, grid, mix
from .triangle import collinearity_residual, embed_coords, render_svg, trace_level_curves

LAMBDA_GRID = tuple(k / 10.0 for k in range(1, 10))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betweenu",
        description="Build and audit implicit mixture-linear utility representations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = (
        ("repr", "tabulate U(x) and u(x, t) over a simplex grid"),
        ("check", "run the axiom checks and report counterexamples"),
        ("triangle", "trace indifference curves on 3 outcomes"),
        ("separation", "audit the separating functionals per level"),
    )
    for name, blurb in specs:
        cmd = sub.add_parser(name, help=blurb)
        cmd.add_argument("--model", required=True, help="path to a JSON model description")
        cmd.add_argument(
            "--grid", type=int, default=6, help="simplex grid resolution (default 6)"
        )
        cmd.add_argument(
            "--t-grid",
            type=int,
            default=11,
            dest="t_grid",
            help="number of uniform levels in [0, 1] for u(x, t) tables (default 11)",
        )
        cmd.add_argument(
            "--levels",
            default="0.2,0.4,0.6,0.8",
            help="comma-separated utility levels for triangle/separation (default 0.2,0.4,0.6,0.8)",
        )
        cmd.add_argument(
            "--seed", type=int, default=0, help="seed for subsampled checks (default 0)"
        )
        cmd.add_argument("--out", default="out", help="output directory (default ./out)")
    return parser


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _parse_levels(raw: str) -> list[float]:
    try:
        levels = [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"could not parse --levels {raw!r} as comma-separated floats")
    if not levels:
        raise ValueError("--levels must name at least one level")
    return levels


def _interior(levels) -> list[float]:
    for level in levels:
        if not 0.0 < level < 1.0:
            raise ValueError(f"levels must lie strictly inside (0, 1), got {level!r}")
    return list(levels)


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    print(f"wrote {path}")


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {path}")


def _in_repr(v: float) -> str:
    return repr(float(v))


def _out_fmt(v: float) -> str:
    return format(float(v), ".12g")


def cmd_repr(model, args) -> int:
    ctx = context_for(model)
    n = model.n_outcomes
    samples = sorted(grid(n, args.grid))
    u_of = solve_utility_many(ctx, samples)

    header = [f"p{i}" for i in range(n)]
    lines = [",".join(header + ["U"])]
    for x, u in zip(samples, u_of):
        lines.append(",".join([_in_repr(p) for p in x.probs] + [_out_fmt(u)]))
    _write_text(os.path.join(args.out, "U.csv"), "\n".join(lines) + "\n")

    levels = np.linspace(0.0, 1.0, args.t_grid)
    columns = [
        implicit_utility_many(ctx, samples, np.full(len(samples), float(t))) for t in levels
    ]
    lines = [",".join(header + ["t", "u"])]
    for i, x in enumerate(samples):
        for j, t in enumerate(levels):
            lines.append(
                ",".join(
                    [_in_repr(p) for p in x.probs] + [_in_repr(t), _out_fmt(columns[j][i])]
                )
            )
    _write_text(os.path.join(args.out, "u.csv"), "\n".join(lines) + "\n")

    gaps = [abs(utility_fixed_point(ctx, x) - float(u)) for x, u in zip(samples, u_of)]
    summary = {
        "n_outcomes": n,
        "grid_resolution": args.grid,
        "t_grid_points": args.t_grid,
        "best": list(ctx.best.probs),
        "worst": list(ctx.worst.probs),
        "tol_t": ctx.tol_t,
        "max_iter": ctx.max_iter,
        "eps_pref": model.eps_pref,
        "max_fixed_point_gap": max(gaps),
        "one_sided_limits": {
            f"vertex_{i}": one_sided_limits(ctx, degenerate(i, n)) for i in range(n)
        },
    }
    _write_json(os.path.join(args.out, "summary.json"), summary)
    return 0


def cmd_check(model, args) -> int:
    samples = sorted(grid(model.n_outcomes, args.grid))
    reports = run_all_checks(model, samples, LAMBDA_GRID, seed=args.seed)
    payload = {
        "grid_resolution": args.grid,
        "lambdas": list(LAMBDA_GRID),
        "seed": args.seed,
        "reports": [report.to_dict() for report in reports],
    }
    _write_json(os.path.join(args.out, "axioms.json"), payload)
    failed = [report.axiom for report in reports if not report.passed]
    if failed:
        print(f"failed: {', '.join(failed)}")
        return 1
    print("all axiom checks passed")
    return 0


def cmd_triangle(model, args, levels) -> int:
    if model.n_outcomes != 3:
        _fail(f"triangle needs a 3-outcome model, got {model.n_outcomes} outcomes")
        return 2
    ctx = context_for(model)
    curves = trace_level_curves(ctx, levels)
    lines = ["level,p0,p1,p2,x,y"]
    for curve in curves:
        coords = embed_coords(curve.points)
        for point, (ex, ey) in zip(curve.points, coords):
            lines.append(
                ",".join(
                    [_in_repr(curve.level)]
                    + [_out_fmt(p) for p in point.probs]
                    + [_out_fmt(ex), _out_fmt(ey)]
                )
            )
    _write_text(os.path.join(args.out, "curves.csv"), "\n".join(lines) + "\n")
    _write_text(
        os.path.join(args.out, "triangle.svg"), render_svg(curves, ctx.best, ctx.worst)
    )
    for curve in curves:
        print(
            f"level {curve.level:g}: {len(curve.points)} points, "
            f"collinearity residual {collinearity_residual(curve.points):.3e}"
        )
    return 0


def _query_polytopes(ctx, x) -> list[Polytope]:
    n = ctx.model.n_outcomes
    simplex = Polytope(tuple(sorted(degenerate(i, n) for i in range(n))))
    hull_of_x = Polytope(tuple(sorted((ctx.best, ctx.worst, x))))
    pulled = [mix(0.5, v, x) for v in simplex.vertices if v not in (ctx.best, ctx.worst)]
    widened = Polytope(tuple(sorted((ctx.best, ctx.worst, x, *pulled))))
    return [hull_of_x, simplex, widened]


def cmd_separation(model, args, levels) -> int:
    ctx = context_for(model)
    n = model.n_outcomes
    simplex = Polytope(tuple(sorted(degenerate(i, n) for i in range(n))))
    grid_samples = sorted(grid(n, args.grid))
    queries = sorted(grid(n, 3))
    entries = []
    all_ok = True
    for t in levels:
        entry = {"level": t}
        try:
            base = contour_samples(ctx, t, simplex)
            audit = sorted({x.probs: x for x in [*base, *grid_samples]}.values())
            functional = separate(ctx, t, simplex, audit)
            check = verify_separation(ctx, t, functional, audit)
            entry["functional"] = functional.to_dict()
            entry["separation"] = check.to_dict()
            level_ok = check.passed
        except Infeasible as exc:
            entry["infeasible"] = str(exc)
            level_ok = False
        if level_ok:
            cross = []
            worst_gap = 0.0
            for x in queries:
                result = cross_polytope_consistency(ctx, x, t, _query_polytopes(ctx, x))
                worst_gap = max(worst_gap, result.max_discrepancy)
                level_ok = level_ok and result.passed
                cross.append({"lottery": list(x.probs), **result.to_dict()})
            entry["cross_polytope"] = cross
            entry["max_cross_discrepancy"] = worst_gap
        entries.append(entry)
        all_ok = all_ok and level_ok
    payload = {
        "grid_resolution": args.grid,
        "levels": list(levels),
        "entries": entries,
    }
    _write_json(os.path.join(args.out, "separation.json"), payload)
    if not all_ok:
        print("separation audit failed")
        return 1
    print("separation audit passed")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.grid < 1:
            raise ValueError(f"--grid must be >= 1, got {args.grid}")
        if args.t_grid < 2:
            raise ValueError(f"--t-grid must be >= 2, got {args.t_grid}")
        levels = _parse_levels(args.levels)
        if args.command in ("triangle", "separation"):
            levels = _interior(levels)
        model = load_model(args.model)
    except (OSError, ValueError) as exc:
        _fail(str(exc))
        return 2
    try:
        os.makedirs(args.out, exist_ok=True)
        if args.command == "repr":
            return cmd_repr(model, args)
        if args.command == "check":
            return cmd_check(model, args)
        if args.command == "triangle":
            return cmd_triangle(model, args, levels)
        return cmd_separation(model, args, levels)
    except Infeasible as exc:
        _fail(f"Infeasible: {exc}")
        return 1
    except BetweenuError as exc:
        _fail(f"{type(exc).__name__}: {exc}")
        return 3
    except OSError as exc:
        _fail(str(exc))
        return 2


def run() -> None:
    raise SystemExit(main())
