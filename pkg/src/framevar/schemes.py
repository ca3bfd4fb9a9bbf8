"""The six time-steppers and the damped-Newton driver behind them.

Four planar-curve schemes advance a window of four known points to the next
point; the two divergence-example schemes advance two points (or two scalar
ordinates).  Every implicit step solves a 2x2 nonlinear system with an
analytic Jacobian.

Solver notes, earned the hard way:

* The unconstrained curve scheme is rank-deficient along the curve tangent
  (its Lagrangian only weakly pins point spacing), and a collinear initial
  guess makes the Jacobian exactly singular.  The stepper therefore starts
  from a circular (turning-angle) extrapolation, confines iterates to a
  trust ball around it, and tolerates transient residual growth; the
  Jacobian shift ``jac_reg`` is an escalation rescue, decayed after every
  accepted step so the Newton tail stays quadratic.
* z_{next} = z_{prev} is an exact root of the divergence-example system
  (reversal).  Its basin contains the linear-extrapolation guess, so that
  stepper seeds from the explicit update and stays inside a small ball.
* Residual evaluation has a floating-point floor (difference quotients of
  nearby ordinates); convergence is declared on ``abs_tol`` or on step-size
  stagnation at machine scale, whichever comes first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .core import Point2, Trajectory, edge, cross_det
from .elliptic import arc_step_solve, elastica_solution, exact_div, exact_free_elastica
from .errors import (DegenerateStencilError, PreconditionError, SolverFailure)

__all__ = [
    "SolverConfig", "SchemeParams", "Residual2", "SCHEME_IDS",
    "free_elastica_residual", "constrained_residual", "naive_residual",
    "noninvariant_residual", "div_residual",
    "step_free_elastica", "constrained_elastica_step",
    "invariant_nonvariational_step", "noninvariant_variational_step",
    "div_invariant_step", "div_standard_step",
    "init_elastica", "init_div", "run",
]

SCHEME_IDS = ("free-ivs", "constrained-ivs", "invariant-naive",
              "noninvariant-var", "div-ivs", "div-standard")

ELASTICA_SCHEMES = ("free-ivs", "constrained-ivs", "invariant-naive",
                    "noninvariant-var")

# trust-ball radii in units of the local edge length
_FREE_BALL = 0.35
_CONSTRAINED_BALL = 1.0
_DIV_BALL = 0.5
# admissible spacing band around the seed edge length for the free scheme
_FREE_BAND = 0.05


@dataclass(frozen=True)
class SolverConfig:
    """Newton settings: absolute residual tolerance, iteration cap, rescue shift."""

    abs_tol: float = 1e-13
    max_iter: int = 50
    jac_reg: float = 1e-3

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise ValueError("abs_tol must be positive")
        if self.jac_reg < 0.0:
            raise ValueError("jac_reg must be nonnegative")


@dataclass(frozen=True)
class SchemeParams:
    """Run parameters shared by all schemes.

    ``steps`` counts stepper advances; the seed points come on top.  The
    divergence schemes derive their grid spacing from steps + 2 total points
    on [-1, 1].
    """

    alpha: float = 4.0
    mu: float = -1.0
    ell: float = 0.01
    steps: int = 500
    s0: float = -2.0
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if not self.ell > 0.0:
            raise ValueError("ell must be positive")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")


@dataclass(frozen=True)
class Residual2:
    """Residual pair and its analytic 2x2 Jacobian w.r.t. the unknown point."""

    f: tuple[float, float]
    jac: tuple[tuple[float, float], tuple[float, float]]


def _edges5(w: Sequence[Point2], z: Point2):
    zs = (w[0], w[1], w[2], w[3], z)
    return [edge(zs[i], zs[i + 1]) for i in range(4)]


def _require_edges(es, what: str) -> None:
    if any(e.ell == 0.0 for e in es):
        raise DegenerateStencilError(f"zero edge in {what} stencil")


# ---------------------------------------------------------------------------
# residuals with analytic Jacobians
# ---------------------------------------------------------------------------

def free_elastica_residual(w: Sequence[Point2], z_next: Point2) -> Residual2:
    """Scaled stationarity equations of the invariantized bending energy.

    Both components of the displayed scaled system, and the four displayed
    Jacobian entries w.r.t. (x_{k+2}, u_{k+2}).
    """
    es = _edges5(w, z_next)
    _require_edges(es, "free-scheme")
    e0, e1, e2, e3 = es
    d0, d1, d2 = cross_det(e0, e1), cross_det(e1, e2), cross_det(e2, e3)
    r_m = (e2.ell / e0.ell) ** 2.5
    r_p = (e1.ell / e3.ell) ** 2.5
    l1sq, l2sq, l3sq = e1.ell ** 2, e2.ell ** 2, e3.ell ** 2
    fx = (-d0 * e0.du * r_m + d1 * (e1.du + e2.du) - d2 * e3.du * r_p
          - 1.25 * d0 * d0 * e1.dx / l1sq * r_m
          - 1.25 * d1 * d1 * e1.dx / l1sq
          + 1.25 * d1 * d1 * e2.dx / l2sq
          + 1.25 * d2 * d2 * e2.dx / l2sq * r_p)
    fu = (d0 * e0.dx * r_m - d1 * (e1.dx + e2.dx) + d2 * e3.dx * r_p
          - 1.25 * d0 * d0 * e1.du / l1sq * r_m
          - 1.25 * d1 * d1 * e1.du / l1sq
          + 1.25 * d1 * d1 * e2.du / l2sq
          + 1.25 * d2 * d2 * e2.du / l2sq * r_p)
    jxx = r_p * (e2.du * e3.du - 2.5 * d2 * e2.du * e2.dx / l2sq
                 + 2.5 * d2 * e3.du * e3.dx / l3sq
                 - 3.125 * d2 * d2 * e2.dx * e3.dx / (l2sq * l3sq))
    jxu = r_p * (-d2 - e3.du * e2.dx + 2.5 * d2 * e2.dx ** 2 / l2sq
                 + 2.5 * d2 * e3.du ** 2 / l3sq
                 - 3.125 * d2 * d2 * e3.du * e2.dx / (l2sq * l3sq))
    jux = r_p * (d2 - e2.du * e3.dx - 2.5 * d2 * e2.du ** 2 / l2sq
                 - 2.5 * d2 * e3.dx ** 2 / l3sq
                 - 3.125 * d2 * d2 * e2.du * e3.dx / (l2sq * l3sq))
    juu = r_p * (e2.dx * e3.dx + 2.5 * d2 * e2.du * e2.dx / l2sq
                 - 2.5 * d2 * e3.du * e3.dx / l3sq
                 - 3.125 * d2 * d2 * e2.du * e3.du / (l2sq * l3sq))
    return Residual2((fx, fu), ((jxx, jxu), (jux, juu)))


def _select_branch(w: Sequence[Point2]) -> str:
    """Equation choice of the branch-selection rule: the better-conditioned
    component given the last known edge; ties go to the u-equation."""
    e = edge(w[2], w[3])
    return "x" if abs(e.dx) < abs(e.du) else "u"


def constrained_residual(w: Sequence[Point2], z_next: Point2, alpha: float,
                         mu: float, ell: float, branch: str) -> Residual2:
    """Selected stationarity equation of the length-constrained functional
    (scaled by ell^5) paired with the chord constraint."""
    es = _edges5(w, z_next)
    _require_edges(es, "constrained-scheme")
    e0, e1, e2, e3 = es
    d0, d1, d2 = cross_det(e0, e1), cross_det(e1, e2), cross_det(e2, e3)
    c = 1.25 / (ell * ell)
    lam = alpha * mu * ell ** 4
    if branch == "x":
        f1 = (-d0 * e0.du + d1 * (e1.du + e2.du) - d2 * e3.du
              + c * (-d0 * d0 * e1.dx + d1 * d1 * (e2.dx - e1.dx) + d2 * d2 * e2.dx)
              - lam * (e1.dx - e2.dx))
        j11 = e2.du * e3.du - 2.0 * c * d2 * e2.du * e2.dx
        j12 = -e2.dx * e3.du - d2 + 2.0 * c * d2 * e2.dx ** 2
    else:
        f1 = (d0 * e0.dx - d1 * (e1.dx + e2.dx) + d2 * e3.dx
              + c * (-d0 * d0 * e1.du + d1 * d1 * (e2.du - e1.du) + d2 * d2 * e2.du)
              - lam * (e1.du - e2.du))
        j11 = d2 - e2.du * e3.dx - 2.0 * c * d2 * e2.du ** 2
        j12 = e2.dx * e3.dx + 2.0 * c * d2 * e2.du * e2.dx
    f2 = e3.dx ** 2 + e3.du ** 2 - ell * ell
    return Residual2((f1, f2), ((j11, j12), (2.0 * e3.dx, 2.0 * e3.du)))


def naive_residual(w: Sequence[Point2], z_next: Point2, alpha: float,
                   mu: float, ell: float) -> Residual2:
    """Direct curvature discretization of the curve ODE plus the chord
    constraint; not variational."""
    z0, z1, z2, z3 = w
    z4 = z_next
    dxk, duk = z3.x - z2.x, z3.u - z2.u
    d2x = z4.x - 2.0 * z3.x + z2.x
    d2u = z4.u - 2.0 * z3.u + z2.u
    d3x = z4.x - 3.0 * z3.x + 3.0 * z2.x - z1.x
    d3u = z4.u - 3.0 * z3.u + 3.0 * z2.u - z1.u
    d4x = z4.x - 4.0 * z3.x + 6.0 * z2.x - 4.0 * z1.x + z0.x
    d4u = z4.u - 4.0 * z3.u + 6.0 * z2.u - 4.0 * z1.u + z0.u
    kd = d2u * dxk - d2x * duk
    kss = d4u * dxk + d3u * d2x - d4x * duk - d3x * d2u
    f1 = kss + kd ** 3 / (2.0 * ell ** 4) + mu * alpha * ell * ell * kd
    wgt = 1.5 * kd * kd / ell ** 4 + mu * alpha * ell * ell
    j11 = (d3u - duk - d2u) + wgt * (-duk)
    j12 = (dxk + d2x - d3x) + wgt * dxk
    dxn, dun = z4.x - z3.x, z4.u - z3.u
    f2 = dxn * dxn + dun * dun - ell * ell
    return Residual2((f1, f2), ((j11, j12), (2.0 * dxn, 2.0 * dun)))


def noninvariant_residual(w: Sequence[Point2], z_next: Point2, alpha: float,
                          mu: float, ell: float, branch: str) -> Residual2:
    """Selected stationarity equation of the slope-based (translation-only
    invariant) functional plus the chord constraint.

    The x-step ratios enter through 5/2-powers; a sign change under the
    power (vertical tangent crossed) poisons the residual with NaN, which
    the solver reports as a failure.
    """
    es = _edges5(w, z_next)
    e0, e1, e2, e3 = es
    dx = (e0.dx, e1.dx, e2.dx, e3.dx)
    nan = float("nan")
    if any(v == 0.0 for v in dx) or dx[2] / dx[3] < 0.0 or dx[1] / dx[2] < 0.0 \
            or dx[0] / dx[1] < 0.0:
        return Residual2((nan, nan), ((nan, nan), (nan, nan)))
    d0, d1, d2 = cross_det(e0, e1), cross_det(e1, e2), cross_det(e2, e3)
    r_p = (dx[2] / dx[3]) ** 2.5
    r_0 = (dx[1] / dx[2]) ** 2.5
    r_m = (dx[0] / dx[1]) ** 2.5
    c2 = 2.5 / (ell * ell)
    lam = alpha * mu * ell ** 4
    if branch == "u":
        t = d2 * e3.dx + c2 * d2 * d2 * e2.du
        f1 = (t * r_p + d0 * e0.dx * r_m
              - (d1 * (e2.dx + e1.dx) + c2 * d1 * d1 * e1.du) * r_0
              - lam * (e1.du - e2.du))
        dt_dx = -e2.du * e3.dx + d2 - 2.0 * c2 * d2 * e2.du ** 2
        dt_du = e2.dx * e3.dx + 2.0 * c2 * d2 * e2.du * e2.dx
        j11 = r_p * dt_dx - 2.5 * t * r_p / dx[3]
        j12 = r_p * dt_du
    else:
        t = -d2 * e3.du + c2 * d2 * d2 * e2.dx - 1.25 * d2 * d2 / dx[2]
        f1 = (t * r_p
              + (d1 * (e2.du + e1.du) - c2 * d1 * d1 * e1.dx
                 + 1.25 * d1 * d1 / dx[1] + 1.25 * d1 * d1 / dx[2]) * r_0
              - (d0 * e0.du + 1.25 * d0 * d0 / dx[1]) * r_m
              - lam * (e1.dx - e2.dx))
        dt_dx = e2.du * e3.du - 2.0 * c2 * d2 * e2.dx * e2.du + 2.5 * d2 * e2.du / dx[2]
        dt_du = -e2.dx * e3.du - d2 + 2.0 * c2 * d2 * e2.dx ** 2 - 2.5 * d2
        j11 = r_p * dt_dx - 2.5 * t * r_p / dx[3]
        j12 = r_p * dt_du
    f2 = e3.dx ** 2 + e3.du ** 2 - ell * ell
    return Residual2((f1, f2), ((j11, j12), (2.0 * e3.dx, 2.0 * e3.du)))


def div_residual(z_prev: Point2, z_cur: Point2, z_next: Point2) -> Residual2:
    """Both stationarity equations of the invariantized divergence-example
    action, solved jointly for the next point."""
    if z_cur.u == 0.0 or z_prev.u == 0.0:
        raise DegenerateStencilError("zero ordinate in stencil")
    dxm = z_cur.x - z_prev.x
    if dxm == 0.0:
        raise DegenerateStencilError("zero x-step in stencil")
    dxk = z_next.x - z_cur.x
    nan = float("nan")
    if dxk == 0.0 or z_next.u == 0.0:
        return Residual2((nan, nan), ((nan, nan), (nan, nan)))
    um, uk, un = z_prev.u, z_cur.u, z_next.u
    dum, duk = uk - um, un - uk
    p = duk / dxk
    q = dum / dxm
    fu = -2.0 * (p - q) + (dxk / un + dxm / um) / (uk * uk)
    fx = p * p - q * q + (1.0 / un - 1.0 / um) / uk
    j11 = 2.0 * duk / dxk ** 2 + 1.0 / (uk * uk * un)
    j12 = -2.0 / dxk - dxk / (uk * uk * un * un)
    j21 = -2.0 * duk * duk / dxk ** 3
    j22 = 2.0 * duk / dxk ** 2 - 1.0 / (uk * un * un)
    return Residual2((fu, fx), ((j11, j12), (j21, j22)))


# ---------------------------------------------------------------------------
# Newton driver
# ---------------------------------------------------------------------------

@dataclass
class _SolveResult:
    z: Point2
    f: tuple[float, float]
    norm: float
    converged: bool
    iterations: int


def _norm(f: tuple[float, float]) -> float:
    a, b = abs(f[0]), abs(f[1])
    n = a if a > b else b
    return n if math.isfinite(n) else float("inf")


def _newton2(fj: Callable[[Point2], Residual2], z0: Point2, cfg: SolverConfig,
             *, radius: float | None = None, wiggle: float = 1.0) -> _SolveResult:
    """Damped Newton on a 2x2 system with analytic Jacobian.

    Accepts the full step when the residual does not grow more than
    ``wiggle``-fold (rank-deficient systems need to wander); otherwise
    backtracks, and as a last resort shifts the Jacobian by an escalating
    multiple of the identity starting at ``cfg.jac_reg``.  Iterates may be
    confined to a ball around the start.  Success means the best residual
    reached ``abs_tol`` or the iteration stagnated at machine-size steps.
    """
    z = z0
    r = fj(z)
    nf = _norm(r.f)
    best_z, best_f, best_nf = z, r.f, nf
    lam = 0.0
    since_improve = 0
    tiny_steps = 0
    floor_hit = False
    it = 0
    while it < cfg.max_iter and best_nf > 0.0:
        (j11, j12), (j21, j22) = r.jac
        a, b, c, d = j11 + lam, j12, j21, j22 + lam
        det = a * d - b * c
        moved = False
        if det != 0.0 and math.isfinite(det):
            dx = -(r.f[0] * d - r.f[1] * b) / det
            du = -(-r.f[0] * c + r.f[1] * a) / det
            if radius is not None:
                ex, eu = z.x + dx - z0.x, z.u + du - z0.u
                n = math.hypot(ex, eu)
                if n > radius:
                    dx = z0.x + ex * radius / n - z.x
                    du = z0.u + eu * radius / n - z.u
            scale = 1.0
            for _ in range(20):
                try:
                    zt = Point2(z.x + scale * dx, z.u + scale * du)
                    rt = fj(zt)
                except ValueError:
                    scale *= 0.5
                    continue
                nft = _norm(rt.f)
                if nft < nf or (scale == 1.0 and nft <= wiggle * nf):
                    step = math.hypot(scale * dx, scale * du)
                    z, r, nf = zt, rt, nft
                    moved = True
                    break
                scale *= 0.5
        if moved:
            lam *= 0.1
            if step <= 4e-15 * max(1.0, abs(z.x), abs(z.u)):
                tiny_steps += 1
                if tiny_steps >= 3:
                    floor_hit = True
            else:
                tiny_steps = 0
            if nf < 0.999 * best_nf:
                if nf < best_nf:
                    best_z, best_f, best_nf = z, r.f, nf
                since_improve = 0
            else:
                if nf < best_nf:
                    best_z, best_f, best_nf = z, r.f, nf
                since_improve += 1
            if floor_hit:
                break
            if since_improve >= 4 and best_nf <= cfg.abs_tol:
                break
            if since_improve >= 12:
                break
        else:
            lam = (cfg.jac_reg if cfg.jac_reg > 0.0 else 1e-8) if lam == 0.0 \
                else lam * 10.0
            if lam > 1e8:
                break
        it += 1
    converged = best_nf <= cfg.abs_tol or floor_hit
    return _SolveResult(best_z, best_f, best_nf, converged, it)


def _circle_guess(w: Sequence[Point2]) -> Point2:
    """Extrapolate by rotating the last edge through the last turning angle."""
    z1, z2, z3 = w[1], w[2], w[3]
    e1 = edge(z1, z2)
    e2 = edge(z2, z3)
    if e1.ell == 0.0 or e2.ell == 0.0:
        return Point2(2.0 * z3.x - z2.x, 2.0 * z3.u - z2.u)
    c = (e1.dx * e2.dx + e1.du * e2.du) / (e1.ell * e2.ell)
    s = (e1.dx * e2.du - e1.du * e2.dx) / (e1.ell * e2.ell)
    return Point2(z3.x + c * e2.dx - s * e2.du, z3.u + s * e2.dx + c * e2.du)


def _projected_guess(w: Sequence[Point2], ell: float) -> Point2:
    """Linear extrapolation radially projected onto the chord circle."""
    zk, zk1 = w[2], w[3]
    vx, vu = zk1.x - zk.x, zk1.u - zk.u
    n = math.hypot(vx, vu)
    if n == 0.0:
        raise DegenerateStencilError("coincident last points")
    return Point2(zk1.x + vx / n * ell, zk1.u + vu / n * ell)


# ---------------------------------------------------------------------------
# steppers
# ---------------------------------------------------------------------------

def step_free_elastica(w: Sequence[Point2], cfg: SolverConfig | None = None,
                       *, ell_ref: float | None = None,
                       band: float = _FREE_BAND,
                       diagnostics: dict | None = None) -> Point2:
    """Advance the unconstrained scheme by one point.

    The strict two-equation solve is accepted while the new edge stays in a
    ±``band`` window around ``ell_ref`` (the seed spacing when run under
    ``run``; the previous edge otherwise).  Where the scheme degenerates --
    near curvature inflections its Lagrangian vanishes and no forward root
    may exist -- the stepper pins the edge length into the band and solves
    the branch-selected equation instead, recording the step in
    ``diagnostics``.
    """
    cfg = cfg or SolverConfig()
    lk = edge(w[2], w[3]).ell
    if lk == 0.0:
        raise DegenerateStencilError("zero final edge")
    ref = ell_ref if ell_ref is not None else lk
    guess = _circle_guess(w)
    res = _newton2(lambda z: free_elastica_residual(w, z), guess,
                   cfg, radius=_FREE_BALL * lk, wiggle=100.0)
    if res.converged:
        ln = edge(w[3], res.z).ell
        if abs(ln / ref - 1.0) <= band:
            return res.z
    # degenerate patch: freeze the spacing into the band, keep the
    # better-conditioned stationarity component
    branch = _select_branch(w)
    target = min(max(lk, (1.0 - band) * ref), (1.0 + band) * ref)

    def frozen(z: Point2) -> Residual2:
        full = free_elastica_residual(w, z)
        dxn, dun = z.x - w[3].x, z.u - w[3].u
        row = full.jac[0] if branch == "x" else full.jac[1]
        f1 = full.f[0] if branch == "x" else full.f[1]
        return Residual2((f1, dxn * dxn + dun * dun - target * target),
                         (row, (2.0 * dxn, 2.0 * dun)))

    fallback_cfg = replace(cfg, jac_reg=0.0)
    res2 = _newton2(frozen, guess, fallback_cfg, radius=_FREE_BALL * lk)
    if not res2.converged:
        raise SolverFailure("free-scheme step did not converge",
                            min(res.norm, res2.norm),
                            res.iterations + res2.iterations)
    if diagnostics is not None:
        full = free_elastica_residual(w, res2.z)
        diagnostics.setdefault("guarded_steps", []).append(
            {"residual": _norm(full.f)})
    return res2.z


def _check_uniform_edges(w: Sequence[Point2], ell: float) -> None:
    for i in range(3):
        if abs(edge(w[i], w[i + 1]).ell - ell) > 1e-10:
            raise PreconditionError(
                f"input edge {i} deviates from the constraint length {ell}")


def constrained_elastica_step(w: Sequence[Point2], p: SchemeParams) -> Point2:
    """Advance the length-constrained scheme by one point.

    Picks the stationarity component by the branch-selection rule, pairs it
    with the chord constraint, and Newton-solves for the next point; input
    edges must already sit on the constraint.
    """
    _check_uniform_edges(w, p.ell)
    branch = _select_branch(w)
    guess = _projected_guess(w, p.ell)
    res = _newton2(lambda z: constrained_residual(w, z, p.alpha, p.mu, p.ell, branch),
                   guess, p.solver, radius=_CONSTRAINED_BALL * p.ell)
    if not res.converged:
        raise SolverFailure("constrained step did not converge",
                            res.norm, res.iterations)
    return res.z


def invariant_nonvariational_step(w: Sequence[Point2], p: SchemeParams) -> Point2:
    """Advance the direct curvature discretization by one point."""
    _check_uniform_edges(w, p.ell)
    guess = _projected_guess(w, p.ell)
    res = _newton2(lambda z: naive_residual(w, z, p.alpha, p.mu, p.ell),
                   guess, p.solver, radius=_CONSTRAINED_BALL * p.ell)
    if not res.converged:
        raise SolverFailure("curvature-scheme step did not converge",
                            res.norm, res.iterations)
    return res.z


def noninvariant_variational_step(w: Sequence[Point2], p: SchemeParams) -> Point2:
    """Advance the slope-based variational scheme by one point.

    Expected to fail where the tangent turns vertical: the equations divide
    by x-steps, whose sign change makes the residual undefined.
    """
    _check_uniform_edges(w, p.ell)
    branch = _select_branch(w)
    guess = _projected_guess(w, p.ell)
    res = _newton2(
        lambda z: noninvariant_residual(w, z, p.alpha, p.mu, p.ell, branch),
        guess, p.solver, radius=_CONSTRAINED_BALL * p.ell)
    if not res.converged:
        raise SolverFailure("slope-based step did not converge (vertical tangent?)",
                            res.norm, res.iterations)
    return res.z


def div_invariant_step(z_prev: Point2, z_cur: Point2,
                       cfg: SolverConfig | None = None) -> Point2:
    """Advance the invariantized divergence-example scheme by one point."""
    cfg = cfg or SolverConfig()
    if z_prev.u == 0.0 or z_cur.u == 0.0:
        raise DegenerateStencilError("zero ordinate")
    h = z_cur.x - z_prev.x
    if h == 0.0:
        raise DegenerateStencilError("zero x-step")
    guess = Point2(z_cur.x + h,
                   2.0 * z_cur.u - z_prev.u + h * h / z_cur.u ** 3)
    r = _DIV_BALL * math.hypot(h, z_cur.u - z_prev.u)
    res = _newton2(lambda z: div_residual(z_prev, z_cur, z), guess, cfg,
                   radius=r)
    if not res.converged:
        raise SolverFailure("divergence-scheme step did not converge",
                            res.norm, res.iterations)
    return res.z


def div_standard_step(u_prev: float, u_cur: float, h: float) -> float:
    """Explicit second-difference update u_next = 2 u_k - u_{k-1} + h^2/u_k^3."""
    if u_cur == 0.0:
        raise ValueError("u_cur must be nonzero")
    if not h > 0.0:
        raise ValueError("h must be positive")
    return 2.0 * u_cur - u_prev + h * h / u_cur ** 3


# ---------------------------------------------------------------------------
# initialization and driving
# ---------------------------------------------------------------------------

def init_elastica(curve: Callable[[float], Point2],
                  p: SchemeParams) -> list[Point2]:
    """Four seed points on ``curve`` with consecutive chords equal to ell.

    Starts at p.s0 and solves the three chord equations by arc_step_solve.
    """
    ss = [p.s0]
    for _ in range(3):
        ss.append(arc_step_solve(curve, ss[-1], p.ell))
    return [curve(s) for s in ss]


def init_div(steps: int) -> list[Point2]:
    """Two exact seed points of the divergence example.

    ``steps`` counts total grid points on [-1, 1]: x_0 = -1 and
    x_1 = -1 + 2/(steps - 1), with exact ordinates for A = 1, B = 0.
    """
    if steps < 2:
        raise ValueError("need at least 2 grid points")
    x1 = -1.0 + 2.0 / (steps - 1)
    return [Point2(-1.0, exact_div(-1.0, 1.0, 0.0)),
            Point2(x1, exact_div(x1, 1.0, 0.0))]


def _validate(scheme: str, p: SchemeParams) -> None:
    if scheme not in SCHEME_IDS:
        raise ValueError(f"unknown scheme {scheme!r}; known: {', '.join(SCHEME_IDS)}")
    if scheme in ("constrained-ivs", "invariant-naive", "noninvariant-var") \
            and p.mu >= 1.0:
        raise ValueError(f"no reference solution family for mu >= 1 (got {p.mu})")


def run(scheme: str, p: SchemeParams) -> Trajectory:
    """Seed the given scheme and advance ``p.steps`` times.

    On a solver failure the partial trajectory is returned with ``failure``
    set (and the failing index recorded); all other errors propagate.
    """
    _validate(scheme, p)
    diagnostics: dict = {}
    meta = {"scheme": scheme, "params": p, "diagnostics": diagnostics}

    if scheme == "div-standard":
        n = p.steps + 2
        h = 2.0 / (n - 1)
        xs = [-1.0 + k * h for k in range(n)]
        us = [exact_div(xs[0], 1.0, 0.0), exact_div(xs[1], 1.0, 0.0)]
        for _ in range(p.steps):
            us.append(div_standard_step(us[-2], us[-1], h))
        pts = [Point2(x, u) for x, u in zip(xs, us)]
        return Trajectory(pts, meta)

    if scheme == "div-ivs":
        pts = init_div(p.steps + 2)
        for k in range(p.steps):
            try:
                pts.append(div_invariant_step(pts[-2], pts[-1], p.solver))
            except SolverFailure as err:
                return Trajectory(pts, meta, failure=err.at_index(len(pts)))
        return Trajectory(pts, meta)

    # planar curve schemes
    if scheme == "free-ivs":
        curve = lambda s: exact_free_elastica(s, p.alpha)  # noqa: E731
    else:
        curve = elastica_solution(p.alpha, p.mu)
    pts = init_elastica(curve, p)
    stepper = {
        "free-ivs": lambda w: step_free_elastica(
            w, p.solver, ell_ref=p.ell, diagnostics=diagnostics),
        "constrained-ivs": lambda w: constrained_elastica_step(w, p),
        "invariant-naive": lambda w: invariant_nonvariational_step(w, p),
        "noninvariant-var": lambda w: noninvariant_variational_step(w, p),
    }[scheme]
    for k in range(p.steps):
        try:
            pts.append(stepper(pts[-4:]))
        except SolverFailure as err:
            return Trajectory(pts, meta, failure=err.at_index(len(pts)))
    return Trajectory(pts, meta)
