import math

import pytest

from framevar.conserved import (ConservedTriple, continuous_conserved_div,
                                continuous_conserved_elastica, div_conserved,
                                div_relation_residual, drift,
                                elastica_constrained_conserved,
                                elastica_free_conserved)
from framevar.core import Point2, Trajectory
from framevar.elliptic import exact_div
from framevar.schemes import (SchemeParams, constrained_elastica_step, init_div,
                              run)

from conftest import arc_stencil, loop_window


class TestElasticaFreeConserved:
    def test_collinear_stencil_vanishes(self):
        w = [Point2(0.01 * k, 0.005 * k) for k in range(4)]
        c = elastica_free_conserved(w)
        assert (c.c1, c.c2, c.c3) == (0.0, 0.0, 0.0)

    def test_translation_leaves_c1_c2(self, rng):
        for _ in range(50):
            w = arc_stencil(rng, n=4)
            a, b = rng.uniform(-3, 3), rng.uniform(-3, 3)
            ws = [Point2(p.x + a, p.u + b) for p in w]
            c0, c1 = elastica_free_conserved(w), elastica_free_conserved(ws)
            assert c1.c1 == pytest.approx(c0.c1, rel=1e-9, abs=1e-18)
            assert c1.c2 == pytest.approx(c0.c2, rel=1e-9, abs=1e-18)

    def test_c3_translates_affinely(self, rng):
        # under (a, b): C3 -> C3 + a C2 - b C1, directly from its closed form
        for _ in range(50):
            w = arc_stencil(rng, n=4)
            a, b = rng.uniform(-3, 3), rng.uniform(-3, 3)
            ws = [Point2(p.x + a, p.u + b) for p in w]
            c0, c1 = elastica_free_conserved(w), elastica_free_conserved(ws)
            want = c0.c3 + a * c0.c2 - b * c0.c1
            assert c1.c3 == pytest.approx(want, rel=1e-9, abs=1e-15)

    def test_accepts_five_point_window(self):
        w = [Point2(0.01 * k, 0.0001 * k * k) for k in range(5)]
        assert elastica_free_conserved(w[:4]) == elastica_free_conserved(w)


class TestElasticaConstrainedConserved:
    def test_mu_zero_matches_scaled_free_quantities(self, rng):
        # with all edges at ell, the constrained triple at mu = 0 is ell^5
        # times the unconstrained one
        p = SchemeParams(alpha=4.0, mu=0.0, ell=0.01)
        for _ in range(50):
            w = arc_stencil(rng, ell=p.ell, n=4)
            free = elastica_free_conserved(w)
            cons = elastica_constrained_conserved(w, p)
            s = p.ell ** 5
            assert cons.c1 == pytest.approx(free.c1 * s, rel=1e-10, abs=1e-22)
            assert cons.c2 == pytest.approx(free.c2 * s, rel=1e-10, abs=1e-22)
            assert cons.c3 == pytest.approx(free.c3 * s, rel=1e-10, abs=1e-22)

    def test_collinear_mu_zero_vanishes(self):
        p = SchemeParams(alpha=4.0, mu=0.0, ell=0.01)
        w = [Point2(0.006 * k, 0.008 * k) for k in range(4)]
        c = elastica_constrained_conserved(w, p)
        # collinear coordinates are not exactly representable; only
        # cancellation dust survives
        assert max(abs(c.c1), abs(c.c2), abs(c.c3)) < 1e-18

    def test_conserved_across_one_accepted_step(self):
        # brute-force Noether check on solver output
        p = SchemeParams(alpha=4.0, mu=-1.0, ell=0.01)
        w = loop_window(120)
        z = constrained_elastica_step(w, p)
        before = elastica_constrained_conserved(w, p)
        after = elastica_constrained_conserved([*w[1:], z], p)
        assert after.c1 == pytest.approx(before.c1, abs=1e-10)
        assert after.c2 == pytest.approx(before.c2, abs=1e-10)
        assert after.c3 == pytest.approx(before.c3, abs=1e-10)


class TestDivConserved:
    def test_direct_substitution(self):
        c = div_conserved(Point2(0, 1), Point2(1, 2))
        assert c.c1 == pytest.approx(1.5)

    def test_hand_arithmetic_edge(self):
        # edge (0,1)->(1,2): p=1, W=-... cross = (2*0 - 1*1)/1 = -1
        c = div_conserved(Point2(0, 1), Point2(1, 2))
        assert c.c2 == pytest.approx((0 + 1) / 2 + 2 * 1 * (-1))  # = -1.5
        assert c.c3 == pytest.approx(0.0 / 2 + 1.0)               # = 1
        r = div_relation_residual(c, Point2(0, 1), Point2(1, 2))
        assert r == pytest.approx(0.0, abs=1e-14)

    def test_exact_samples_approach_continuous_energy(self):
        # C1 on exact-solution edges tends to the continuous value 1 (A=1)
        vals = []
        for h in (0.1, 0.05, 0.025):
            x = 0.4
            c = div_conserved(Point2(x, exact_div(x, 1, 0)),
                              Point2(x + h, exact_div(x + h, 1, 0)))
            vals.append(abs(c.c1 - 1.0))
        assert vals[2] < vals[0] / 8.0
        assert vals[2] < 2e-4

    def test_relation_is_coordinate_identity(self, rng):
        # off-shell edges included: the relation holds identically
        worst = 0.0
        for _ in range(1000):
            zk = Point2(rng.uniform(-2, 2), rng.uniform(0.2, 3))
            zn = Point2(zk.x + rng.uniform(0.05, 1.5), rng.uniform(0.2, 3))
            c = div_conserved(zk, zn)
            scale = max(abs(c.c2 * c.c2 / 4), abs(c.c1 * c.c3), 1.0)
            worst = max(worst, abs(div_relation_residual(c, zk, zn)) / scale)
        assert worst < 1e-11

    def test_relation_tends_to_continuous_limit(self):
        # as the x-step shrinks, the correction term vanishes and the
        # continuous relation C2^2/4 - C1 C3 + 1 = 0 emerges
        x = 0.3
        for h in (0.1, 0.01, 0.001):
            c = div_conserved(Point2(x, exact_div(x, 1, 0)),
                              Point2(x + h, exact_div(x + h, 1, 0)))
            raw = c.c2 ** 2 / 4 - c.c1 * c.c3 + 1.0
            assert abs(raw) < 0.3 * h * h


class TestContinuousConserved:
    def test_div_exact_solution_values(self, rng):
        # A=1, B=0: C1 = 1, C2 = 0, C3 = 1 for every x; relation = 0
        for _ in range(50):
            x = rng.uniform(-2, 2)
            u = exact_div(x, 1, 0)
            ux = x / u
            c = continuous_conserved_div(x, u, ux)
            assert c.c1 == pytest.approx(1.0, abs=1e-13)
            assert c.c2 == pytest.approx(0.0, abs=1e-13)
            assert c.c3 == pytest.approx(1.0, abs=1e-13)
            assert c.c2 ** 2 / 4 - c.c1 * c.c3 + 1 == pytest.approx(0, abs=1e-12)

    def test_elastica_straight_line_state(self):
        c = continuous_conserved_elastica(0.7, 1.3, 0.4, 0.0, 0.0)
        assert (c.c1, c.c2, c.c3) == (0.0, 0.0, 0.0)


class TestDrift:
    def test_exactly_conserved_data_gives_zero_series(self):
        # craft a trajectory from one fixed edge shape translated along x:
        # the div quantities are not constant, so use genuinely exact data:
        # replaying identical segments is simplest for the elastica window
        pts = [Point2(0.01 * k, 0.0) for k in range(8)]
        traj = Trajectory(pts, {"scheme": "free-ivs"})
        series = drift(traj, "free-ivs")
        assert max(series.max_drift()) == 0.0

    def test_reference_index_for_elastica_is_two(self):
        p = SchemeParams(steps=4)
        traj = run("constrained-ivs", p)
        series = drift(traj)
        assert series.k0 == 2
        assert len(series.dc1) == len(traj) - 3

    def test_standard_div_drift_reaches_claimed_size_and_trends_up(self):
        traj = run("div-standard", SchemeParams(steps=98))
        series = drift(traj)
        assert max(series.dc2) >= 1e-5
        n = len(series.dc2)
        first = sum(series.dc2[: n // 4]) / (n // 4)
        last = sum(series.dc2[-(n // 4):]) / (n // 4)
        assert last > 10 * first

    def test_invariant_runs_conserve(self):
        traj = run("constrained-ivs", SchemeParams(steps=300))
        assert max(drift(traj).max_drift()) <= 1e-9
        traj = run("div-ivs", SchemeParams(steps=98))
        assert max(drift(traj).max_drift()) <= 1e-11

    def test_free_run_conserves_while_strictly_variational(self):
        # away from curvature inflections (first one near s = -1.854) and
        # before the flow's intrinsic spacing creep trips the guard band,
        # every step is a true stationary point and all three quantities
        # are conserved at solver precision
        p = SchemeParams(alpha=4.0, ell=0.01, s0=-1.7, steps=25)
        traj = run("free-ivs", p)
        assert traj.failure is None
        assert not traj.meta["diagnostics"].get("guarded_steps")
        assert max(drift(traj, "free-ivs").max_drift()) <= 1e-9

    def test_too_short_trajectory(self):
        pts = [Point2(0, 0), Point2(0.01, 0)]
        with pytest.raises(ValueError):
            drift(Trajectory(pts, {"scheme": "constrained-ivs",
                                   "params": SchemeParams()}), "constrained-ivs")
