"""Shared helpers: random stencil factories and brute-force oracles."""

from __future__ import annotations

import math
import random

import pytest

from framevar.core import Point2
from framevar.elliptic import elastica_solution
from framevar.schemes import SchemeParams, init_elastica


@pytest.fixture
def rng():
    return random.Random(20260810)


def arc_stencil(rng: random.Random, ell: float = 0.01, n: int = 4,
                min_turn: float = 0.05, max_turn: float = 0.6) -> list[Point2]:
    """A generic healthy stencil: equal-length edges with bounded turning.

    Turning angles per edge stay well away from zero so the curvature-driven
    schemes are nondegenerate, and well below pi/2 so no edge reverses.
    """
    x, u = rng.uniform(-1, 1), rng.uniform(-1, 1)
    theta = rng.uniform(-math.pi, math.pi)
    sign = 1.0 if rng.random() < 0.5 else -1.0
    pts = [Point2(x, u)]
    for _ in range(n - 1):
        pts.append(Point2(pts[-1].x + ell * math.cos(theta),
                          pts[-1].u + ell * math.sin(theta)))
        theta += sign * rng.uniform(min_turn, max_turn)
    return pts


def loop_window(k: int, ell: float = 0.01) -> list[Point2]:
    """Four consecutive exact seed-quality points of the mu=-1 loop at offset k."""
    curve = elastica_solution(4.0, -1.0)
    p = SchemeParams(alpha=4.0, mu=-1.0, ell=ell, s0=-2.0 + k * ell)
    return init_elastica(curve, p)


def nested_refine_minimum(fnorm, center: Point2, dir_strong, dir_weak,
                          half: float, rounds: int = 90, grid: int = 7) -> Point2:
    """Derivative-free minimizer for needle-shaped residual landscapes.

    The schemes' 2x2 systems are near rank-one: their zero sets are slivers
    aligned with a weak direction, invisible to a plain 2-D grid.  For each
    offset on the weak axis this resolves the strong direction by a 1-D
    refining grid, then refines the weak offset against that profile.  The
    two directions come from the stencil geometry, not from any Jacobian.
    """
    def line_min(base: Point2, direction, h: float):
        best = (fnorm(base), 0.0)
        c = 0.0
        for _ in range(rounds):
            for i in range(grid):
                t = c + h * (2.0 * i / (grid - 1) - 1.0)
                v = fnorm(Point2(base.x + t * direction[0],
                                 base.u + t * direction[1]))
                if v < best[0]:
                    best = (v, t)
            c = best[1]
            h *= 0.7
        return best  # (value, offset)

    def profile(tau: float) -> float:
        base = Point2(center.x + tau * dir_weak[0], center.u + tau * dir_weak[1])
        return line_min(base, dir_strong, half)[0]

    c, h = 0.0, half
    best = (profile(0.0), 0.0)
    for _ in range(rounds):
        for i in range(grid):
            t = c + h * (2.0 * i / (grid - 1) - 1.0)
            v = profile(t)
            if v < best[0]:
                best = (v, t)
        c = best[1]
        h *= 0.7
    tau = best[1]
    base = Point2(center.x + tau * dir_weak[0], center.u + tau * dir_weak[1])
    _, nu = line_min(base, dir_strong, half)
    return Point2(base.x + nu * dir_strong[0], base.u + nu * dir_strong[1])


def refine_minimum(fnorm, center: Point2, half: float, rounds: int = 75,
                   grid: int = 9) -> Point2:
    """Brute-force 2-D minimizer: recentred, slowly shrinking grid search.

    Independent of any Newton machinery.  The slow shrink (x0.7 per round)
    lets the window track curved residual valleys without stranding the
    minimizer outside it.
    """
    cx, cu = center.x, center.u
    best = (math.inf, cx, cu)
    for _ in range(rounds):
        for i in range(grid):
            for j in range(grid):
                x = cx + half * (2.0 * i / (grid - 1) - 1.0)
                u = cu + half * (2.0 * j / (grid - 1) - 1.0)
                v = fnorm(Point2(x, u))
                if v < best[0]:
                    best = (v, x, u)
        cx, cu = best[1], best[2]
        half *= 0.7
    return Point2(best[1], best[2])
