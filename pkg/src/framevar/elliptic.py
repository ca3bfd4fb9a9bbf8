"""Special functions and closed-form reference solutions.

Convention: the second argument of every elliptic function here is the
parameter m (Mathematica's convention), which may be negative.  The
incomplete integrals F and E delegate to scipy; the amplitude function is
computed by inverting F with a guarded, bracketed Newton iteration, which is
robust for every m < 1 and the moderate arguments (|t| <= ~10) used by the
reference solutions.

The planar reference curves are arc-length parametrized: |dz/ds| = 1 for
every family, which the tests exploit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy import special as _sp

from .core import Point2
from .errors import InitializationError

__all__ = [
    "jacobi_am", "jacobi_sn", "jacobi_dn", "ellint_F_inc", "ellint_E_inc",
    "exact_free_elastica", "exact_case1", "exact_case2", "exact_case3",
    "exact_div", "ElasticaSolutionParams", "elastica_solution", "arc_step_solve",
]


def _check_param(m: float) -> None:
    if not (math.isfinite(m) and m < 1.0):
        raise ValueError(f"elliptic parameter must satisfy m < 1, got {m}")


def ellint_F_inc(phi: float, m: float) -> float:
    """Incomplete elliptic integral of the first kind F(phi | m)."""
    _check_param(m)
    return float(_sp.ellipkinc(phi, m))


def ellint_E_inc(phi: float, m: float) -> float:
    """Incomplete elliptic integral of the second kind E(phi | m)."""
    _check_param(m)
    return float(_sp.ellipeinc(phi, m))


def jacobi_am(t: float, m: float) -> float:
    """Amplitude function: the phi with F(phi | m) = t, increasing in t.

    Newton on F(phi) - t = 0 seeded with the m = 0 value phi = t, kept inside
    the bracket [t, t*sqrt(1-m)] (order swapped for 0 < m < 1) and bisected
    whenever a Newton update would leave it.
    """
    _check_param(m)
    if t == 0.0 or m == 0.0:
        return t
    sgn = 1.0
    if t < 0.0:
        sgn, t = -1.0, -t
    # integrand of F lies between 1 and 1/sqrt(1-m), giving hard bounds on phi
    if m < 0.0:
        lo, hi = t, t * math.sqrt(1.0 - m)
    else:
        lo, hi = t * math.sqrt(1.0 - m), t
    phi = min(max(t, lo), hi)
    for _ in range(200):
        f = ellint_F_inc(phi, m) - t
        if f > 0.0:
            hi = min(hi, phi)
        else:
            lo = max(lo, phi)
        # dF/dphi = 1/sqrt(1 - m sin^2 phi)
        nxt = phi - f * math.sqrt(1.0 - m * math.sin(phi) ** 2)
        if not lo <= nxt <= hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - phi) <= 1e-16 * max(1.0, abs(phi)):
            phi = nxt
            break
        phi = nxt
    return sgn * phi


def jacobi_sn(t: float, m: float) -> float:
    """Elliptic sine: sin of the amplitude."""
    return math.sin(jacobi_am(t, m))


def jacobi_dn(t: float, m: float) -> float:
    """Delta amplitude: sqrt(1 - m sn^2); positive for every m < 1."""
    s = jacobi_sn(t, m)
    return math.sqrt(1.0 - m * s * s)


def exact_free_elastica(s: float, alpha: float) -> Point2:
    """Arc-length parametrized solution of the free bending-energy extremal."""
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    t = math.sqrt(alpha / 2.0) * s
    am = jacobi_am(t, -1.0)
    r = math.sqrt(2.0 / alpha)
    return Point2(r * ellint_E_inc(am, -1.0) - s, r * math.sin(am))


def exact_case1(s: float, alpha: float, mu: float) -> Point2:
    """Closed form for -1 < mu < 1 (oscillatory family)."""
    if not -1.0 < mu < 1.0:
        raise ValueError(f"case1 needs mu in (-1, 1), got {mu}")
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    a = math.sqrt(2.0 * (1.0 - mu) / alpha)
    c = math.sqrt(2.0 * (1.0 + mu) / alpha)
    m = -(a * a) / (c * c)
    t = 0.5 * c * alpha * s
    am = jacobi_am(t, m)
    return Point2(c * ellint_E_inc(am, m) - s, a * math.sin(am))


def exact_case2(s: float, alpha: float) -> Point2:
    """Closed form for mu = -1 (single-loop solitary solution)."""
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    ra = math.sqrt(alpha)
    return Point2(2.0 * math.tanh(ra * s) / ra - s, 2.0 / (ra * math.cosh(ra * s)))


def exact_case3(s: float, alpha: float, mu: float) -> Point2:
    """Closed form for mu < -1 (non-crossing winding family)."""
    if not mu < -1.0:
        raise ValueError(f"case3 needs mu < -1, got {mu}")
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    a = math.sqrt(2.0 * (1.0 - mu) / alpha)
    c = math.sqrt(-2.0 * (1.0 + mu) / alpha)
    m = 1.0 - (a * a) / (c * c)
    t = 0.5 * c * alpha * s
    am = jacobi_am(t, m)
    return Point2(c * ellint_E_inc(am, m) + mu * s, c * jacobi_dn(t, m))


def exact_div(x: float, A: float, B: float) -> float:
    """General solution sqrt(((A x + B)^2 + 1)/A) of u'' = 1/u^3."""
    if not A > 0.0:
        raise ValueError("A must be positive")
    return math.sqrt(((A * x + B) ** 2 + 1.0) / A)


@dataclass(frozen=True)
class ElasticaSolutionParams:
    """Picks the closed-form family for a (mu, alpha) pair."""

    alpha: float
    mu: float

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive")
        if self.mu >= 1.0:
            raise ValueError(f"no solution family for mu >= 1 (got {self.mu})")

    @property
    def case(self) -> str:
        if self.mu == -1.0:
            return "case2"
        return "case3" if self.mu < -1.0 else "case1"


def elastica_solution(alpha: float, mu: float) -> Callable[[float], Point2]:
    """Arc-length parametrized exact solution for the given (alpha, mu)."""
    params = ElasticaSolutionParams(alpha, mu)
    if params.case == "case2":
        return lambda s: exact_case2(s, alpha)
    if params.case == "case3":
        return lambda s: exact_case3(s, alpha, mu)
    return lambda s: exact_case1(s, alpha, mu)


def arc_step_solve(curve: Callable[[float], Point2], s_prev: float,
                   ell: float) -> float:
    """Smallest s > s_prev with |curve(s) - curve(s_prev)| = ell.

    Brackets in (s_prev, s_prev + 4 ell], bisects to locate the crossing, then
    polishes with a secant iteration down to ~1e-13 chord residual.  All
    reference curves move at unit speed, so the root sits near s_prev + ell.
    """
    if not ell > 0.0:
        raise ValueError("ell must be positive")
    p0 = curve(s_prev)

    def g(s: float) -> float:
        p = curve(s)
        return math.hypot(p.x - p0.x, p.u - p0.u) - ell

    lo, hi = s_prev, s_prev + 4.0 * ell
    if g(hi) <= 0.0:
        raise InitializationError(
            f"no chord of length {ell} inside ({s_prev}, {s_prev + 4 * ell}]")
    glo = -ell
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm > 0.0:
            hi = mid
        else:
            lo, glo = mid, gm
    s = 0.5 * (lo + hi)
    gs = g(s)
    # secant polish; g is smooth with slope ~1 here
    s2, g2 = lo, glo
    for _ in range(60):
        if gs == 0.0 or g2 == gs:
            break
        s_new = s - gs * (s - s2) / (gs - g2)
        if not lo <= s_new <= hi + (hi - lo):
            break
        s2, g2 = s, gs
        s, gs = s_new, g(s_new)
        if abs(gs) <= 1e-15 * max(1.0, ell) and abs(s - s2) <= 1e-15 * max(1.0, abs(s)):
            break
    return s
