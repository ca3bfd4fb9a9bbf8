"""Command-line front end.

Subcommands: ``simulate`` (one run, CSV output), ``benchmark`` (convergence
ladder, CSV), ``exact`` (closed-form samples, CSV), ``report`` (the full
reproduction suite: CSVs plus rendered figures).

Exit codes: 0 success, 2 validation error, 3 solver failure (partial CSV is
still written), 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import bench, conserved, reporting
from .core import Trajectory
from .elliptic import (elastica_solution, exact_div, exact_free_elastica)
from .errors import FramevarError, SolverFailure
from .schemes import SCHEME_IDS, SchemeParams, SolverConfig, run

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_IO = 4

_EXACT_FAMILIES = ("free", "case1", "case2", "case3", "div")


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framevar",
        description="Symmetry-preserving variational difference schemes: "
                    "simulate, benchmark, and audit conserved quantities.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value file; explicit flags win")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--mu", type=float, default=-1.0)
        p.add_argument("--alpha", type=float, default=4.0)
        p.add_argument("--ell", type=float, default=0.01)
        p.add_argument("--steps", type=int, default=500)
        p.add_argument("--s0", type=float, default=-2.0)
        p.add_argument("--tol", type=float, default=1e-13,
                       help="absolute Newton residual tolerance")
        p.add_argument("--jac-reg", type=float, default=1e-3,
                       help="Jacobian shift used as a conditioning rescue")

    sim = sub.add_parser("simulate", help="run one scheme and emit CSV files")
    common(sim)
    sim.add_argument("--scheme", required=True, choices=SCHEME_IDS)
    sim.add_argument("--emit", default="trajectory",
                     help="comma list of trajectory,drift,invariants")

    ben = sub.add_parser("benchmark", help="run the convergence ladder")
    common(ben)
    ben.add_argument("--scheme", required=True, choices=SCHEME_IDS)

    exa = sub.add_parser("exact", help="sample a closed-form solution")
    common(exa)
    exa.add_argument("--family", required=True, choices=_EXACT_FAMILIES)
    exa.add_argument("--range", default="-2:2", dest="srange",
                     help="LO:HI parameter range (s for curves, x for div)")
    exa.add_argument("--samples", type=int, default=101)
    exa.add_argument("--A", type=float, default=1.0)
    exa.add_argument("--B", type=float, default=0.0)

    rep = sub.add_parser("report",
                         help="reproduce the experiment suite with figures")
    common(rep)
    rep.add_argument("--only", default="all",
                     help="one of all,free-loop,schemes,noninvariant,"
                          "mu-sweep,div-drift,tables")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    # config values fill in anything not given explicitly on the command
    # line, so flags always win
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        casts = {"mu": float, "alpha": float, "ell": float, "steps": int,
                 "s0": float, "tol": float, "jac_reg": float, "samples": int,
                 "A": float, "B": float}
        for key, value in _read_config(args.config).items():
            if not hasattr(args, key):
                raise ValueError(f"unknown config key {key!r}")
            flag = "--" + key.replace("_", "-")
            explicit = any(tok == flag or tok.startswith(flag + "=")
                           for tok in argv)
            if not explicit:
                setattr(args, key, casts.get(key, str)(value))
    return args


def _params(args: argparse.Namespace) -> SchemeParams:
    return SchemeParams(alpha=args.alpha, mu=args.mu, ell=args.ell,
                        steps=args.steps, s0=args.s0,
                        solver=SolverConfig(abs_tol=args.tol,
                                            jac_reg=args.jac_reg))


def _emit_run_outputs(out: Path, traj: Trajectory, emit: set[str],
                      scheme: str) -> None:
    if "trajectory" in emit:
        reporting.write_trajectory(out / "trajectory.csv", traj)
    if "drift" in emit or "invariants" in emit:
        series = conserved.drift(traj, scheme)
        if "drift" in emit:
            reporting.write_drift(out / "drift.csv", series)
        if "invariants" in emit:
            triples = conserved._series_for(traj, scheme)
            reporting.write_invariants(out / "invariants.csv", triples,
                                       series.k0)


def _cmd_simulate(args) -> int:
    emit = {e.strip() for e in args.emit.split(",") if e.strip()}
    unknown = emit - {"trajectory", "drift", "invariants"}
    if unknown:
        print(f"unknown emit flags: {sorted(unknown)}", file=sys.stderr)
        return EXIT_VALIDATION
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    traj = run(args.scheme, _params(args))
    _emit_run_outputs(out, traj, emit, args.scheme)
    if traj.failure is not None:
        print(f"solver failure at index {traj.failure.index}: "
              f"|f| = {traj.failure.residual_norm:.3e} after "
              f"{traj.failure.iterations} iterations; wrote partial output "
              f"({len(traj)} points)", file=sys.stderr)
        return EXIT_SOLVER
    print(f"wrote {len(traj)} points to {out}")
    return EXIT_OK


def _cmd_benchmark(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report = bench.benchmark(args.scheme, _params(args))
    reporting.write_bench(out / "bench.csv", report)
    print(f"{'scale':>10} {'steps':>6} {'err_x':>10} {'err_u':>10} "
          f"{'eoc_x':>6} {'eoc_u':>6} {'time':>7}")
    for r in report.rows:
        print(f"{r.scale:>10.5g} {r.steps:>6d} {r.err_x:>10.3e} "
              f"{r.err_u:>10.3e} {r.eoc_x:>6.2f} {r.eoc_u:>6.2f} "
              f"{r.wall_time:>6.2f}s")
    if report.failure is not None:
        print(f"ladder aborted: {report.failure}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def _cmd_exact(args) -> int:
    lo, hi = (float(v) for v in args.srange.split(":"))
    n = args.samples
    if n < 1:
        print("need at least one sample", file=sys.stderr)
        return EXIT_VALIDATION
    ts = [lo + (hi - lo) * i / max(n - 1, 1) for i in range(n)]
    rows = []
    if args.family == "div":
        for x in ts:
            rows.append((x, x, exact_div(x, args.A, args.B)))
    else:
        if args.family == "free":
            curve = lambda s: exact_free_elastica(s, args.alpha)  # noqa: E731
        else:
            mu = {"case1": args.mu if -1 < args.mu < 1 else 0.0,
                  "case2": -1.0,
                  "case3": args.mu if args.mu < -1 else -1.2}[args.family]
            curve = elastica_solution(args.alpha, mu)
        for s in ts:
            p = curve(s)
            rows.append((s, p.x, p.u))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reporting.write_exact_samples(out / "exact.csv", rows)
    print(f"wrote {len(rows)} samples to {out / 'exact.csv'}")
    return EXIT_OK


def _report_free_loop(out: Path, args) -> None:
    p = _params(args)
    traj = run("free-ivs", p)
    curve = lambda s: exact_free_elastica(s, p.alpha)  # noqa: E731
    ref = bench.chord_sampled_reference(curve, p.s0, p.ell, len(traj))
    reporting.write_trajectory(out / "free_loop.csv", traj)
    reporting.render_curve_figure(
        out / "free_loop.png",
        [("scheme", traj.points), ("exact (uniform chords)", ref)],
        "unconstrained scheme, 500 steps")


def _report_schemes(out: Path, args) -> None:
    p = _params(args)
    ivs = run("constrained-ivs", p)
    naive = run("invariant-naive", p)
    curve = elastica_solution(p.alpha, p.mu)
    ref = bench.chord_sampled_reference(curve, p.s0, p.ell, len(ivs))
    reporting.render_curve_figure(
        out / "elastica_schemes.png",
        [("variational", ivs.points), ("curvature-based", naive.points),
         ("exact", ref)],
        f"mu={p.mu}, alpha={p.alpha}, {p.steps} steps")
    for name, traj in (("constrained", ivs), ("naive", naive)):
        series = conserved.drift(traj)
        reporting.write_drift(out / f"drift_{name}.csv", series)
        reporting.render_drift_figure(out / f"drift_{name}.png", series,
                                      f"{name} scheme drift")


def _report_noninvariant(out: Path, args) -> None:
    p = _params(args)
    traj = run("noninvariant-var", p)
    reporting.write_trajectory(out / "noninvariant.csv", traj)
    caption = "slope-based scheme"
    if traj.failure is not None:
        caption += f" (diverged at index {traj.failure.index})"
    curve = elastica_solution(p.alpha, p.mu)
    ref = bench.chord_sampled_reference(curve, p.s0, p.ell, len(traj))
    reporting.render_curve_figure(out / "noninvariant.png",
                                  [("scheme", traj.points), ("exact", ref)],
                                  caption)
    series = conserved.drift(traj)
    reporting.write_drift(out / "drift_noninvariant.csv", series)
    reporting.render_drift_figure(out / "drift_noninvariant.png", series,
                                  "slope-based scheme drift")


def _report_mu_sweep(out: Path, args) -> None:
    mus = (-1.2, 0.5, 0.0, -0.4, -0.65223, -0.9)
    curves = []
    for mu in mus:
        p = replace(_params(args), mu=mu, steps=1000)
        traj = run("constrained-ivs", p)
        if traj.failure is not None:
            raise traj.failure
        curves.append((f"mu={mu}", traj.points))
        reporting.write_trajectory(out / f"mu_sweep_{mu}.csv", traj)
    reporting.render_curve_figure(out / "mu_sweep.png", curves,
                                  "constrained scheme across mu")


def _report_div_drift(out: Path, args) -> None:
    for scheme in ("div-ivs", "div-standard"):
        p = replace(_params(args), steps=98)
        traj = run(scheme, p)
        if traj.failure is not None:
            raise traj.failure
        series = conserved.drift(traj)
        reporting.write_drift(out / f"drift_{scheme}.csv", series)
        reporting.render_drift_figure(out / f"drift_{scheme}.png", series,
                                      f"{scheme} drift, 100 grid points")


def _report_tables(out: Path, args) -> None:
    for scheme in ("constrained-ivs", "div-ivs", "div-standard"):
        report = bench.benchmark(scheme, _params(args))
        if report.failure is not None:
            raise report.failure
        reporting.write_bench(out / f"bench_{scheme}.csv", report)
        reporting.render_bench_figure(out / f"bench_{scheme}.png", report,
                                      f"{scheme} convergence")


def _cmd_report(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sections = {
        "free-loop": _report_free_loop,
        "schemes": _report_schemes,
        "noninvariant": _report_noninvariant,
        "mu-sweep": _report_mu_sweep,
        "div-drift": _report_div_drift,
        "tables": _report_tables,
    }
    if args.only != "all" and args.only not in sections:
        print(f"unknown report section {args.only!r}", file=sys.stderr)
        return EXIT_VALIDATION
    chosen = sections if args.only == "all" else {args.only: sections[args.only]}
    for name, fn in chosen.items():
        print(f"[report] {name}")
        fn(out, args)
    print(f"report written to {out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = _apply_config(parser, list(sys.argv[1:] if argv is None else argv))
    except (OSError, ValueError) as err:
        print(f"bad configuration: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    handlers = {
        "simulate": _cmd_simulate,
        "benchmark": _cmd_benchmark,
        "exact": _cmd_exact,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except SolverFailure as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValueError, FramevarError) as err:
        print(f"invalid request: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
