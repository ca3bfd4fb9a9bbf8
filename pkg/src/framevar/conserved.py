"""Discrete first integrals, their continuous counterparts, and drift audits.

Each symmetry generator of an invariant discrete action yields a difference
function that is constant along scheme solutions.  The evaluators here work
on raw trajectory points only -- never on solver-internal state -- so a
drift audit is an honest end-to-end check of a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import Point2, Trajectory, cross_det, edge
from .errors import DegenerateStencilError
from .schemes import SchemeParams

__all__ = [
    "ConservedTriple", "DriftSeries",
    "elastica_free_conserved", "elastica_constrained_conserved",
    "div_conserved", "div_relation_residual",
    "continuous_conserved_elastica", "continuous_conserved_div",
    "drift",
]


@dataclass(frozen=True)
class ConservedTriple:
    """The three first integrals (C1, C2, C3) at one lattice site."""

    c1: float
    c2: float
    c3: float

    def __iter__(self):
        yield self.c1
        yield self.c2
        yield self.c3


@dataclass(frozen=True)
class DriftSeries:
    """Per-index deviations |C_i(k) - C_i(k0)| from the first evaluable site."""

    k0: int
    dc1: list[float]
    dc2: list[float]
    dc3: list[float]

    def max_drift(self) -> tuple[float, float, float]:
        return (max(self.dc1), max(self.dc2), max(self.dc3))


def elastica_free_conserved(w: Sequence[Point2]) -> ConservedTriple:
    """First integrals of the unconstrained curve scheme at site k.

    ``w`` is the window (z_{k-2}, z_{k-1}, z_k, z_{k+1}); a trailing fifth
    point from the stepping stencil is accepted and ignored (the formulas do
    not reach it).
    """
    if len(w) < 4:
        raise DegenerateStencilError("need four consecutive points")
    e0, e1, e2 = edge(w[0], w[1]), edge(w[1], w[2]), edge(w[2], w[3])
    if e0.ell == 0.0 or e1.ell == 0.0 or e2.ell == 0.0:
        raise DegenerateStencilError("zero edge in stencil")
    d0, d1 = cross_det(e0, e1), cross_det(e1, e2)
    a5 = (e0.ell * e1.ell) ** 2.5
    b5 = (e1.ell * e2.ell) ** 2.5
    a7 = (e0.ell * e1.ell) ** 3.5
    b7 = (e1.ell * e2.ell) ** 3.5
    c1 = (d1 * e2.du / b5 - d0 * e0.du / a5
          - 1.25 * d1 * d1 * e2.ell * e1.dx / (e1.ell * b7)
          - 1.25 * d0 * d0 * e0.ell * e1.dx / (e1.ell * a7))
    c2 = (d0 * e0.dx / a5 - d1 * e2.dx / b5
          - 1.25 * d1 * d1 * e2.ell * e1.du / (e1.ell * b7)
          - 1.25 * d0 * d0 * e0.ell * e1.du / (e1.ell * a7))
    zk = w[2]
    c3 = zk.x * c2 - zk.u * c1 + d1 * (e1.dx * e2.dx + e1.du * e2.du) / b5
    return ConservedTriple(c1, c2, c3)


def elastica_constrained_conserved(w: Sequence[Point2],
                                   p: SchemeParams) -> ConservedTriple:
    """First integrals of the length-constrained scheme (ell^5-scaled form)."""
    if len(w) < 4:
        raise DegenerateStencilError("need four consecutive points")
    e0, e1, e2 = edge(w[0], w[1]), edge(w[1], w[2]), edge(w[2], w[3])
    if e0.ell == 0.0 or e1.ell == 0.0 or e2.ell == 0.0:
        raise DegenerateStencilError("zero edge in stencil")
    d0, d1 = cross_det(e0, e1), cross_det(e1, e2)
    c = 1.25 / (p.ell * p.ell)
    lam = p.alpha * p.mu * p.ell ** 4
    c1 = (-lam * e1.dx + d1 * e2.du - d0 * e0.du
          - c * d1 * d1 * e1.dx - c * d0 * d0 * e1.dx)
    c2 = (-lam * e1.du + d0 * e0.dx - d1 * e2.dx
          - c * d1 * d1 * e1.du - c * d0 * d0 * e1.du)
    zk = w[2]
    c3 = zk.x * c2 - zk.u * c1 + d1 * (e2.dx * e1.dx + e2.du * e1.du)
    return ConservedTriple(c1, c2, c3)


def div_conserved(z_k: Point2, z_k1: Point2) -> ConservedTriple:
    """First integrals of the divergence-example scheme on one edge."""
    dx = z_k1.x - z_k.x
    if dx == 0.0 or z_k.u == 0.0 or z_k1.u == 0.0:
        raise DegenerateStencilError("need a nonzero x-step and ordinates")
    p = (z_k1.u - z_k.u) / dx
    pr = z_k.u * z_k1.u
    w = (z_k1.u * z_k.x - z_k1.x * z_k.u) / dx
    c1 = p * p + 1.0 / pr
    c2 = (z_k.x + z_k1.x) / pr + 2.0 * p * w
    c3 = z_k.x * z_k1.x / pr + w * w
    return ConservedTriple(c1, c2, c3)


def div_relation_residual(c: ConservedTriple, z_k: Point2,
                          z_k1: Point2) -> float:
    """Residual of the algebraic relation tying the three integrals together.

    C2^2/4 - C1 C3 + 1 = (Δx/(2 u_k u_{k+1}))^2 holds identically in the four
    coordinates (on- and off-shell); the return value is the defect.
    """
    dx = z_k1.x - z_k.x
    w = dx / (z_k.u * z_k1.u)
    return c.c2 * c.c2 / 4.0 - c.c1 * c.c3 + 1.0 - w * w / 4.0


def continuous_conserved_elastica(x: float, u: float, u_x: float, u_xx: float,
                                  u_xxx: float) -> ConservedTriple:
    """Continuous first integrals of the free bending-energy extremal."""
    q = 1.0 + u_x * u_x
    q52 = q ** 2.5
    q72 = q ** 3.5
    q32 = q ** 1.5
    c1 = 2.0 * u_x * u_xxx / q52 - (1.0 + 6.0 * u_x * u_x) * u_xx * u_xx / q72
    c2 = 5.0 * u_x * u_xx * u_xx / q72 - 2.0 * u_xxx / q52
    c3 = ((x + u * u_x) * (2.0 * u_xxx / q52 - 5.0 * u_x * u_xx * u_xx / q72)
          - u * u_xx * u_xx / q52 - 2.0 * u_xx / q32)
    return ConservedTriple(c1, c2, c3)


def continuous_conserved_div(x: float, u: float, u_x: float) -> ConservedTriple:
    """Continuous first integrals of u'' = 1/u^3."""
    if u == 0.0:
        raise ValueError("u must be nonzero")
    c1 = u_x * u_x + 1.0 / (u * u)
    c2 = 2.0 * x / (u * u) - 2.0 * (u - x * u_x) * u_x
    c3 = x * x / (u * u) + (u - x * u_x) ** 2
    return ConservedTriple(c1, c2, c3)


def _series_for(traj: Trajectory, which: str) -> list[ConservedTriple]:
    pts = traj.points
    if which == "free-ivs":
        if len(pts) < 4:
            raise ValueError("trajectory too short for the 4-point stencil")
        return [elastica_free_conserved(pts[k - 2:k + 2])
                for k in range(2, len(pts) - 1)]
    if which in ("constrained-ivs", "invariant-naive", "noninvariant-var"):
        p = traj.meta.get("params")
        if p is None:
            raise ValueError("trajectory lacks scheme parameters in meta")
        if len(pts) < 4:
            raise ValueError("trajectory too short for the 4-point stencil")
        return [elastica_constrained_conserved(pts[k - 2:k + 2], p)
                for k in range(2, len(pts) - 1)]
    if which in ("div-ivs", "div-standard"):
        return [div_conserved(pts[k], pts[k + 1]) for k in range(len(pts) - 1)]
    raise ValueError(f"unknown scheme {which!r}")


def drift(traj: Trajectory, which: str | None = None) -> DriftSeries:
    """Absolute deviations of each first integral from its first evaluable
    value along ``traj`` (absolute, not relative, by design)."""
    which = which or traj.meta.get("scheme")
    if which is None:
        raise ValueError("scheme id required (argument or trajectory meta)")
    series = _series_for(traj, which)
    if not series:
        raise ValueError("trajectory too short to evaluate any site")
    k0 = 2 if which not in ("div-ivs", "div-standard") else 0
    ref = series[0]
    return DriftSeries(
        k0,
        [abs(c.c1 - ref.c1) for c in series],
        [abs(c.c2 - ref.c2) for c in series],
        [abs(c.c3 - ref.c3) for c in series],
    )
