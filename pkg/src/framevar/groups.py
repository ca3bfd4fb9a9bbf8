"""Group actions, discrete moving frames, and invariantized Lagrangians.

Two symmetry groups act on planar lattice curves here:

* the special Euclidean group, acting by rotation + translation, whose
  moving frame sends an edge (z_k, z_{k+1}) to ((0,0), (ℓ_k, 0));
* a projective ("Moebius in x, weight -1 in u") action with unit
  determinant, whose frame sends z_k to (0, 1) and normalizes the next
  ordinate to 1.

Both frames are *right* frames: rho(g.z) = rho(z) g^{-1}.  They are the
correctness oracle for every symmetry-preservation claim in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import Point2, cross_det, edge
from .errors import DegenerateStencilError, SingularActionError

__all__ = [
    "SE2Element", "SL2Element", "StencilWindow",
    "se2_apply", "se2_compose", "se2_inverse", "se2_moving_frame",
    "sl2_apply", "sl2_compose", "sl2_inverse", "sl2_moving_frame",
    "invariant_elastica_lagrangian", "invariant_div_lagrangian",
]

# Stencils are plain tuples of points; operations validate what they need.
StencilWindow = tuple[Point2, ...]


def _wrap_angle(phi: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    phi = math.remainder(phi, 2.0 * math.pi)
    if phi <= -math.pi:
        phi += 2.0 * math.pi
    return phi


@dataclass(frozen=True)
class SE2Element:
    """Rotation by phi followed by translation (a, b); phi kept in (-pi, pi]."""

    a: float
    b: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", _wrap_angle(self.phi))


@dataclass(frozen=True)
class SL2Element:
    """Parameters (alpha, beta, gamma, delta) with alpha*gamma - beta*delta = 1."""

    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        det = self.alpha * self.gamma - self.beta * self.delta
        if abs(det - 1.0) > 1e-12:
            raise ValueError(f"determinant {det} != 1")


SE2_IDENTITY = SE2Element(0.0, 0.0, 0.0)
SL2_IDENTITY = SL2Element(1.0, 0.0, 1.0, 0.0)


def se2_apply(g: SE2Element, p: Point2) -> Point2:
    """(x, u) -> (x cos phi - u sin phi + a, x sin phi + u cos phi + b)."""
    c, s = math.cos(g.phi), math.sin(g.phi)
    return Point2(p.x * c - p.u * s + g.a, p.x * s + p.u * c + g.b)


def se2_compose(g2: SE2Element, g1: SE2Element) -> SE2Element:
    """Element acting as g2 after g1."""
    c, s = math.cos(g2.phi), math.sin(g2.phi)
    return SE2Element(g1.a * c - g1.b * s + g2.a,
                      g1.a * s + g1.b * c + g2.b,
                      g1.phi + g2.phi)


def se2_inverse(g: SE2Element) -> SE2Element:
    c, s = math.cos(g.phi), math.sin(g.phi)
    return SE2Element(-(g.a * c + g.b * s), g.a * s - g.b * c, -g.phi)


def se2_moving_frame(z0: Point2, z1: Point2) -> SE2Element:
    """Right frame of the edge (z0, z1): maps z0 -> (0,0) and z1 -> (ell, 0).

    The rotation angle uses atan2, not atan of the slope, so the frame stays
    equivariant across vertical tangents.
    """
    e = edge(z0, z1)
    if e.ell == 0.0:
        raise DegenerateStencilError("coincident points admit no frame")
    a = -(z0.x * e.dx + z0.u * e.du) / e.ell
    b = (z0.x * e.du - z0.u * e.dx) / e.ell
    phi = -math.atan2(e.du, e.dx)
    return SE2Element(a, b, phi)


def sl2_apply(g: SL2Element, p: Point2) -> Point2:
    """(x, u) -> ((alpha x + beta)/(delta x + gamma), u/(delta x + gamma))."""
    den = g.delta * p.x + g.gamma
    if den == 0.0:
        raise SingularActionError(f"action singular at x = {p.x}")
    return Point2((g.alpha * p.x + g.beta) / den, p.u / den)


def sl2_compose(g2: SL2Element, g1: SL2Element) -> SL2Element:
    """Matrix product of [[alpha, beta], [delta, gamma]] blocks (g2 after g1)."""
    return SL2Element(
        g2.alpha * g1.alpha + g2.beta * g1.delta,
        g2.alpha * g1.beta + g2.beta * g1.gamma,
        g2.delta * g1.beta + g2.gamma * g1.gamma,
        g2.delta * g1.alpha + g2.gamma * g1.delta,
    )


def sl2_inverse(g: SL2Element) -> SL2Element:
    return SL2Element(g.gamma, -g.beta, g.alpha, -g.delta)


def sl2_moving_frame(z0: Point2, z1: Point2) -> SL2Element:
    """Right frame of the edge (z0, z1): z0 -> (0, 1), ordinate of z1 -> 1."""
    dx = z1.x - z0.x
    if z0.u == 0.0 or dx == 0.0:
        raise DegenerateStencilError("frame needs u_k != 0 and a nonzero x-step")
    alpha = 1.0 / z0.u
    beta = -z0.x / z0.u
    delta = (z1.u - z0.u) / dx
    gamma = (z0.u * dx - z0.x * (z1.u - z0.u)) / dx
    return SL2Element(alpha, beta, gamma, delta)


def invariant_elastica_lagrangian(w: Sequence[Point2]) -> float:
    """Invariantized bending-energy summand D_k^2 / (2 (ℓ_k ℓ_{k+1})^{5/2})."""
    if len(w) < 3:
        raise DegenerateStencilError("need three consecutive points")
    e0 = edge(w[0], w[1])
    e1 = edge(w[1], w[2])
    if e0.ell == 0.0 or e1.ell == 0.0:
        raise DegenerateStencilError("zero edge in stencil")
    d = cross_det(e0, e1)
    return d * d / (2.0 * (e0.ell * e1.ell) ** 2.5)


def invariant_div_lagrangian(w: Sequence[Point2]) -> float:
    """Summand (Δu_k)^2/Δx_k - Δx_k/(u_k u_{k+1}) of the invariantized action.

    The telescoping auxiliary-variable difference is omitted: it cancels from
    every Euler--Lagrange equation.  Without it the value is invariant under
    the (beta, gamma) subgroup only; full invariance needs the compensation
    term delta*u^2/(delta*x + gamma) evaluated at both ends (see tests).
    """
    if len(w) < 2:
        raise DegenerateStencilError("need two consecutive points")
    z0, z1 = w[0], w[1]
    dx = z1.x - z0.x
    if dx == 0.0 or z0.u == 0.0 or z1.u == 0.0:
        raise DegenerateStencilError("need a nonzero x-step and nonzero ordinates")
    du = z1.u - z0.u
    return du * du / dx - dx / (z0.u * z1.u)
