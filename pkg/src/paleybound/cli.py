"""Command-line front end.

Subcommands: graph, orbits, l2, theta, omega, hp, range, fit, plot,
export-sdpa, check-cert.  Exit code 0 only when every requested computation
finished with a certified/optimal status.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .clique import DEFAULT_BUDGET, clique_number
from .model import reduce_and_assemble
from .orbits import enumerate_orbits, write_orbits
from .paley import build_graph, hp_bound, theta_eigenvalue
from .plot import plot_bounds
from .report import RunConfig, fit_power, read_csv, run_prime, run_range, write_csv
from .sdpa import export_interchange, read_sdpa
from .solver import (
    DENSE_THETA_LIMIT,
    SdpProblem,
    SolverConfig,
    SolverStatus,
    check_certificate,
    lovasz_theta_sdp,
    solve,
)


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        tol_gap=args.tol_gap,
        tol_feas=args.tol_feas,
        max_iterations=args.max_iter,
        deterministic=args.deterministic,
    )


def _run_config(args) -> RunConfig:
    return RunConfig(solver=_solver_config(args), clique_budget=args.budget)


def cmd_graph(args) -> int:
    g = build_graph(args.p)
    residues = sorted(g.residues)
    print(f"p = {g.p}")
    print(f"vertices = {g.p}, degree = {(g.p - 1) // 2}")
    head = ", ".join(str(r) for r in residues[:12])
    more = " ..." if len(residues) > 12 else ""
    print(f"residues ({len(residues)}): {head}{more}")
    print(f"smallest non-residue k = {g.nonresidues[0]}")
    return 0


def cmd_orbits(args) -> int:
    g = build_graph(args.p)
    orbits = enumerate_orbits(g)
    print(f"p = {g.p}, m = {orbits.m}, (p-5)/24 = {(g.p - 5) / 24:.2f}")
    for rep, size in zip(orbits.representatives, orbits.orbit_sizes):
        print(f"  rep {rep[0]} {rep[1]}  size {size}")
    if args.out:
        write_orbits(orbits, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_l2(args) -> int:
    g = build_graph(args.p)
    inst = reduce_and_assemble(g)
    sol = solve(inst, _solver_config(args))
    print(f"p = {args.p}, m = {inst.m}, d = {inst.d}")
    print(f"L2 value = {sol.value:.6f}")
    print(f"status = {sol.status.value}, gap = {sol.gap:.2e}, "
          f"min_eig = {sol.min_eig:.2e}, iterations = {sol.iterations}, "
          f"wall_time = {sol.wall_time:.2f}s")
    if args.out:
        export_interchange(inst, args.out)
        print(f"wrote {args.out}")
    return 0 if sol.status is SolverStatus.OPTIMAL else 1


def cmd_theta(args) -> int:
    g = build_graph(args.p)
    print(f"analytic theta = sqrt(p) = {theta_eigenvalue(g):.6f}")
    if args.sdp or args.reduced:
        if not args.reduced and g.p > DENSE_THETA_LIMIT:
            print(f"p > {DENSE_THETA_LIMIT}: dense SDP skipped (use --reduced)")
            return 1
        sol = lovasz_theta_sdp(g, _solver_config(args), reduced=args.reduced)
        form = "reduced" if args.reduced else "dense"
        print(f"SDP theta ({form}) = {sol.value:.6f} "
              f"(status {sol.status.value}, gap {sol.gap:.2e}, {sol.iterations} iters)")
        return 0 if sol.status is SolverStatus.OPTIMAL else 1
    return 0


def cmd_omega(args) -> int:
    g = build_graph(args.p)
    res = clique_number(g, budget=args.budget)
    kind = "exact" if res.certified else "lower bound (budget exhausted)"
    print(f"omega = {res.omega} ({kind})")
    print(f"witness = {' '.join(str(v) for v in res.witness)}")
    print(f"nodes explored = {res.nodes_explored}")
    return 0 if res.certified else 1


def cmd_hp(args) -> int:
    print(f"hp bound = {hp_bound(args.p):.6f}")
    return 0


def cmd_range(args) -> int:
    records = run_range(args.p_min, args.p_max, _run_config(args), csv_path=args.out)
    for rec in records:
        print(",".join(rec.csv_row()))
    if args.out:
        print(f"wrote {args.out}", file=sys.stderr)
    ok = all(r.solver_status == SolverStatus.OPTIMAL.value and r.omega_certified for r in records)
    return 0 if ok else 1


def cmd_fit(args) -> int:
    records = read_csv(args.csv)
    fit = fit_power(records, args.column)
    print(f"{args.column} ~ {fit.a:.6g} * p^{fit.b:.6f}  (r2 = {fit.r2:.6f}, n = {fit.n_points})")
    return 0


def cmd_plot(args) -> int:
    records = read_csv(args.csv)
    fits = {}
    for column in args.fit_columns.split(",") if args.fit_columns else []:
        column = column.strip()
        if column:
            fits[column] = fit_power(records, column)
    extra = {}
    if args.extra:
        pts = []
        for rec in read_csv(args.extra):
            if math.isfinite(rec.l2):
                pts.append((rec.p, rec.l2))
        extra["l2"] = pts
    plot_bounds(records, fits, args.out, extra_series=extra)
    print(f"wrote {args.out}")
    return 0


def cmd_export_sdpa(args) -> int:
    g = build_graph(args.p)
    inst = reduce_and_assemble(g)
    export_interchange(inst, args.out)
    print(f"wrote {args.out} (d = {inst.d}, blocks {inst.blocks[0].size} {inst.blocks[1].size})")
    return 0


def cmd_check_cert(args) -> int:
    objective, blocks = read_sdpa(args.sdpa)
    prob = SdpProblem(objective=objective, blocks=tuple(blocks))
    if args.y:
        y = np.array([float(x) for x in args.y.split(",")])
    else:
        with open(args.y_file) as fh:
            y = np.array([float(x) for x in fh.read().split()])
    report = check_certificate(prob, y, tol=args.tol_feas)
    print(f"objective value = {float(objective @ y):.6f}")
    for i, e in enumerate(report.min_eigs, start=1):
        print(f"block {i}: min eigenvalue = {e:.3e}")
    print("certificate valid" if report.valid else "certificate INVALID")
    return 0 if report.valid else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paleybound",
        description="Certified SDP upper bounds on Paley graph clique numbers",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--tol-gap", type=float, default=1e-6, help="relative duality gap tolerance")
    parser.add_argument("--tol-feas", type=float, default=1e-8, help="PSD feasibility slack")
    parser.add_argument("--max-iter", type=int, default=200, help="Newton iteration cap")
    parser.add_argument("--deterministic", action="store_true", default=True)
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="clique search node budget")

    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("graph", help="Paley graph summary")
    sp.add_argument("p", type=int)
    sp.set_defaults(func=cmd_graph)

    sp = sub.add_parser("orbits", help="edge-free triangle orbits")
    sp.add_argument("p", type=int)
    sp.add_argument("--out", help="write orbit snapshot file")
    sp.set_defaults(func=cmd_orbits)

    sp = sub.add_parser("l2", help="solve the block-diagonal relaxation")
    sp.add_argument("p", type=int)
    sp.add_argument("--out", help="also export the instance in sparse SDPA form")
    sp.set_defaults(func=cmd_l2)

    sp = sub.add_parser("theta", help="Lovasz theta (analytic, optionally SDP)")
    sp.add_argument("p", type=int)
    sp.add_argument("--sdp", action="store_true", help="also solve the dense moment SDP")
    sp.add_argument("--reduced", action="store_true", help="solve the 2-variable reduced SDP")
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("omega", help="exact clique number by branch and bound")
    sp.add_argument("p", type=int)
    sp.set_defaults(func=cmd_omega)

    sp = sub.add_parser("hp", help="closed-form clique bound (sqrt(2p-1)+1)/2")
    sp.add_argument("p", type=int)
    sp.set_defaults(func=cmd_hp)

    sp = sub.add_parser("range", help="run the full pipeline over a prime range")
    sp.add_argument("p_min", type=int)
    sp.add_argument("p_max", type=int)
    sp.add_argument("--out", help="CSV output path")
    sp.set_defaults(func=cmd_range)

    sp = sub.add_parser("fit", help="power-law fit of a CSV column")
    sp.add_argument("csv")
    sp.add_argument("--column", default="l2")
    sp.set_defaults(func=cmd_fit)

    sp = sub.add_parser("plot", help="log-log SVG plot of a results CSV")
    sp.add_argument("csv")
    sp.add_argument("--out", required=True)
    sp.add_argument("--fit-columns", default="l2", help="comma-separated columns to fit")
    sp.add_argument("--extra", help="overlay an external CSV of additional values")
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("export-sdpa", help="write the assembled instance in sparse SDPA form")
    sp.add_argument("p", type=int)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_export_sdpa)

    sp = sub.add_parser("check-cert", help="validate a variable vector against an SDPA file")
    sp.add_argument("sdpa")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--y", help="comma-separated variable values")
    group.add_argument("--y-file", help="whitespace-separated values in a file")
    sp.set_defaults(func=cmd_check_cert)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
