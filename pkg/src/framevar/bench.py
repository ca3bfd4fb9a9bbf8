"""Convergence benchmarks against the closed-form solutions.

Curve schemes are measured against the exact solution sampled at uniform
chord length (the reference polyline shares the schemes' equal-edge
geometry).  Divergence schemes are measured in the ordinate only, at the
trajectory's own abscissae: u_k vs u_exact(x_k).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

from .core import Point2, Trajectory, eoc
from .elliptic import arc_step_solve, elastica_solution, exact_div, exact_free_elastica
from .errors import SolverFailure
from .schemes import ELASTICA_SCHEMES, SchemeParams, run

__all__ = ["BenchRow", "BenchReport", "ELASTICA_LADDER", "DIV_LADDER",
           "chord_sampled_reference", "benchmark"]

# (edge length, steps) pairs holding the simulated arc length at 4
ELASTICA_LADDER = ((0.04, 100), (0.02, 200), (0.01, 400), (0.005, 800),
                   (0.0025, 1600))
# total grid points on [-1, 1]
DIV_LADDER = (100, 200, 400, 800, 1600)


@dataclass(frozen=True)
class BenchRow:
    scale: float
    steps: int
    err_x: float
    err_u: float
    eoc_x: float
    eoc_u: float
    wall_time: float


@dataclass(frozen=True)
class BenchReport:
    scheme: str
    rows: tuple[BenchRow, ...]
    failure: SolverFailure | None = None


def chord_sampled_reference(curve, s0: float, ell: float, n: int) -> list[Point2]:
    """n points of ``curve`` starting at s0 with consecutive chords ell."""
    ss = [s0]
    for _ in range(n - 1):
        ss.append(arc_step_solve(curve, ss[-1], ell))
    return [curve(s) for s in ss]


def _elastica_errors(traj: Trajectory, p: SchemeParams, scheme: str):
    if scheme == "free-ivs":
        curve = lambda s: exact_free_elastica(s, p.alpha)  # noqa: E731
    else:
        curve = elastica_solution(p.alpha, p.mu)
    ref = chord_sampled_reference(curve, p.s0, p.ell, len(traj))
    err_x = max(abs(a.x - b.x) for a, b in zip(traj.points, ref))
    err_u = max(abs(a.u - b.u) for a, b in zip(traj.points, ref))
    return err_x, err_u


def _div_error(traj: Trajectory) -> float:
    return max(abs(pt.u - exact_div(pt.x, 1.0, 0.0)) for pt in traj.points)


def benchmark(scheme: str, params: SchemeParams | None = None,
              ladder=None) -> BenchReport:
    """Run the scheme over its scale ladder and tabulate errors and orders.

    A solver failure aborts the ladder; the rows completed so far are
    returned with ``failure`` set.
    """
    base = params or SchemeParams()
    rows: list[BenchRow] = []
    errs_x: list[float] = []
    errs_u: list[float] = []
    scales: list[float] = []
    failure: SolverFailure | None = None
    if scheme in ELASTICA_SCHEMES:
        steps_ladder = ladder or ELASTICA_LADDER
        for ell, steps in steps_ladder:
            p = replace(base, ell=ell, steps=steps)
            t0 = time.perf_counter()
            traj = run(scheme, p)
            if traj.failure is not None:
                failure = traj.failure
                break
            err_x, err_u = _elastica_errors(traj, p, scheme)
            wall = time.perf_counter() - t0
            scales.append(ell)
            errs_x.append(err_x)
            errs_u.append(err_u)
            rows.append(BenchRow(ell, steps, err_x, err_u,
                                 float("nan"), float("nan"), wall))
    elif scheme in ("div-ivs", "div-standard"):
        for n in (ladder or DIV_LADDER):
            p = replace(base, steps=n - 2)
            t0 = time.perf_counter()
            traj = run(scheme, p)
            if traj.failure is not None:
                failure = traj.failure
                break
            err_u = _div_error(traj)
            wall = time.perf_counter() - t0
            scales.append(1.0 / n)
            errs_x.append(float("nan"))
            errs_u.append(err_u)
            rows.append(BenchRow(1.0 / n, n, float("nan"), err_u,
                                 float("nan"), float("nan"), wall))
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    for i in range(1, len(rows)):
        r = rows[i]
        eoc_u = eoc(errs_u, scales, i - 1) if errs_u[i - 1] > 0 else float("nan")
        if math.isnan(errs_x[i]):
            eoc_x = float("nan")
        else:
            eoc_x = eoc(errs_x, scales, i - 1) if errs_x[i - 1] > 0 else float("nan")
        rows[i] = BenchRow(r.scale, r.steps, r.err_x, r.err_u, eoc_x, eoc_u,
                           r.wall_time)
    return BenchReport(scheme, tuple(rows), failure)
