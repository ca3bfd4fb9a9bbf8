"""Lattice data model and elementary difference calculus.

A discrete planar curve is an ordered sequence of samples z_k = (x_k, u_k).
Everything downstream (schemes, conserved quantities, benchmarks) is built
from the forward differences of consecutive samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import SolverFailure

__all__ = [
    "Point2", "EdgeData", "Trajectory",
    "forward_diff", "edge", "cross_det", "linf_error", "eoc",
]


@dataclass(frozen=True)
class Point2:
    """One lattice sample z_k = (x_k, u_k)."""

    x: float
    u: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.u)):
            raise ValueError(f"non-finite point ({self.x}, {self.u})")

    def __iter__(self):
        yield self.x
        yield self.u


@dataclass(frozen=True)
class EdgeData:
    """Forward difference of one lattice edge: (Δx_k, Δu_k, ℓ_k)."""

    dx: float
    du: float
    ell: float


@dataclass
class Trajectory:
    """Ordered lattice samples plus the scheme/parameters that produced them.

    ``failure`` is set when a run aborted early; the points then hold the
    partial trajectory.
    """

    points: list[Point2]
    meta: dict = field(default_factory=dict)
    failure: SolverFailure | None = None

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("a trajectory needs at least 2 points")

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, k: int) -> Point2:
        return self.points[k]


def edge(a: Point2, b: Point2) -> EdgeData:
    """Difference b - a with a robust hypotenuse for the edge length."""
    dx = b.x - a.x
    du = b.u - a.u
    return EdgeData(dx, du, math.hypot(dx, du))


def forward_diff(traj: Trajectory | Sequence[Point2], k: int) -> EdgeData:
    """Forward difference at index k: (x_{k+1}-x_k, u_{k+1}-u_k, ℓ_k)."""
    pts = traj.points if isinstance(traj, Trajectory) else traj
    if not 0 <= k <= len(pts) - 2:
        raise IndexError(f"edge index {k} out of range for {len(pts)} points")
    return edge(pts[k], pts[k + 1])


def cross_det(e0: EdgeData, e1: EdgeData) -> float:
    """2x2 determinant of consecutive edge vectors: Δx_k Δu_{k+1} - Δx_{k+1} Δu_k."""
    return e0.dx * e1.du - e1.dx * e0.du


def linf_error(traj: Trajectory | Sequence[Point2],
               exact: Mapping[int, Point2] | Callable[[int], Point2],
               component: str) -> float:
    """Max over indices of |component_j - exact component_j|.

    ``exact`` maps a lattice index to the reference point; it must be defined
    at every index of the trajectory.
    """
    pts = traj.points if isinstance(traj, Trajectory) else list(traj)
    if not pts:
        raise ValueError("empty trajectory")
    if component not in ("x", "u"):
        raise ValueError(f"component must be 'x' or 'u', got {component!r}")
    get = exact.__getitem__ if hasattr(exact, "__getitem__") else exact
    worst = 0.0
    for j, p in enumerate(pts):
        q = get(j)
        d = abs(p.x - q.x) if component == "x" else abs(p.u - q.u)
        if d > worst:
            worst = d
    return worst


def eoc(errors: Sequence[float], scales: Sequence[float], i: int) -> float:
    """Experimental order of convergence between ladder rows i and i+1."""
    if not 0 <= i < min(len(errors), len(scales)) - 1:
        raise IndexError(f"eoc index {i} out of range")
    for v in (errors[i], errors[i + 1], scales[i], scales[i + 1]):
        if not v > 0.0:
            raise ValueError("eoc needs strictly positive errors and scales")
    return math.log(errors[i + 1] / errors[i]) / math.log(scales[i + 1] / scales[i])
