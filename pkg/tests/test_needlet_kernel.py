"""Cutoff, kernel values, reproducing property, and localization behavior."""

import math

import numpy as np
import pytest
from conftest import random_ball_polynomial, uniform_ball
from scipy.stats import spearmanr

from needlet_lq.needlet_kernel import (
    AdmissibleCutoff,
    NeedletKernel,
    ReproducingKernel,
    ball_metric,
    eta_eval,
)
from needlet_lq.quadrature import ball_rule
from needlet_lq.special_functions import u_eval, v_coeff


class TestCutoff:
    def test_plateau_and_support(self):
        assert eta_eval(0.5) == 1.0
        assert eta_eval(0.0) == 1.0
        assert eta_eval(1.0) == 1.0
        assert eta_eval(2.0) == 0.0
        assert eta_eval(2.3) == 0.0

    def test_midpoint_symmetry(self):
        assert eta_eval(1.5) == pytest.approx(0.5, abs=1e-15)
        for t in (1.1, 1.3, 1.45):
            assert eta_eval(t) + eta_eval(3.0 - t) == pytest.approx(1.0, abs=1e-12)

    def test_strictly_decreasing_inside_transition(self):
        # exp(-1/s) underflows within ~0.03 of the endpoints; strict decrease
        # is checked on the interior, monotonicity everywhere
        interior = np.array([eta_eval(t) for t in np.linspace(1.05, 1.95, 300)])
        assert np.all(np.diff(interior) < 0)
        everywhere = np.array([eta_eval(t) for t in np.linspace(0.0, 2.5, 500)])
        assert np.all(np.diff(everywhere) <= 0)
        assert np.all((everywhere >= 0.0) & (everywhere <= 1.0))

    def test_flat_derivatives_at_junctions(self):
        # one-sided difference quotients vanish at t = 1 and t = 2 for the
        # first few orders, the numerical trace of infinite smoothness
        for t0, sign in ((1.0, 1.0), (2.0, -1.0)):
            for h in (1e-2, 1e-3):
                d1 = (eta_eval(t0 + sign * h) - eta_eval(t0)) / (sign * h)
                d2 = (eta_eval(t0 + 2 * sign * h) - 2 * eta_eval(t0 + sign * h) + eta_eval(t0)) / h**2
                assert abs(d1) < 1e-8
                assert abs(d2) < 1e-6

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            eta_eval(-0.1)
        assert AdmissibleCutoff()(0.7) == 1.0


class TestKernelStructure:
    def test_mode_coefficients(self):
        kern = NeedletKernel(2, 4)
        for k in range(kern.n + 1):
            assert kern.coeffs[k] == pytest.approx(v_coeff(k, 2) ** 2, rel=1e-14)
        assert np.all(kern.coeffs[2 * kern.n :] == 0.0)
        assert np.all(kern.coeffs >= 0.0)
        assert kern.sphere.exact_degree >= 4 * kern.n

    def test_truncated_variant_matches_indicator_cutoff(self):
        rng = np.random.default_rng(20)
        hard = NeedletKernel(2, 4, cutoff=lambda t: 1.0 if t <= 1.0 else 0.0)
        repro = ReproducingKernel(2, 4)
        for _ in range(10):
            x, y = uniform_ball(rng, 2, 2)
            assert hard.eval(x, y) == pytest.approx(repro.eval(x, y), rel=1e-12, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(21)
        for d in (1, 2):
            kern = NeedletKernel(d, 4)
            pts = uniform_ball(rng, 100, d)
            for i in range(0, 100, 2):
                x, y = pts[i], pts[i + 1]
                assert kern.eval(x, y) == pytest.approx(kern.eval(y, x), rel=1e-12, abs=1e-13)

    def test_direct_summation_oracle_d1(self):
        # S^0 has two nodes with unit weights; sum the modes by hand
        kern = NeedletKernel(1, 2)
        for x, y in ((0.0, 0.0), (0.3, -0.5), (0.9, 0.9)):
            direct = sum(
                eta_eval(k / 2) * v_coeff(k, 1) ** 2 * (u_eval(k, 1, x) * u_eval(k, 1, y) + u_eval(k, 1, -x) * u_eval(k, 1, -y))
                for k in range(4)
            )
            assert kern.eval([x], [y]) == pytest.approx(direct, rel=1e-12, abs=1e-13)

    def test_rejects_outside_ball(self):
        kern = NeedletKernel(2, 2)
        with pytest.raises(ValueError, match="outside"):
            kern.eval([1.1, 0.0], [0.0, 0.0])

    def test_gram_psd_and_permutation(self):
        rng = np.random.default_rng(22)
        kern = NeedletKernel(2, 8)
        pts = uniform_ball(rng, 25, 2)
        gram = kern.gram(pts)
        assert np.allclose(gram, gram.T)
        eigvals = np.linalg.eigvalsh(gram)
        assert eigvals[0] >= -1e-8 * float(np.max(np.diagonal(gram)))
        perm = rng.permutation(25)
        gram_p = kern.gram(pts[perm])
        assert np.allclose(gram_p, gram[np.ix_(perm, perm)], rtol=1e-12, atol=1e-12)

    def test_single_point_gram(self):
        kern = NeedletKernel(1, 4)
        gram = kern.gram(np.array([[0.4]]))
        assert gram.shape == (1, 1)
        assert gram[0, 0] >= 0.0


class TestOperator:
    def test_reproduces_constants(self):
        kern = NeedletKernel(2, 4)
        rule = ball_rule(2, 3 * 4)
        val = kern.apply(lambda pts: np.ones(len(pts)), [0.2, -0.1], rule)
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_reproduces_random_polynomials(self):
        rng = np.random.default_rng(23)
        for d, n in ((1, 4), (2, 4), (1, 8)):
            kern = NeedletKernel(d, n)
            rule = ball_rule(d, 3 * n)
            for _ in range(5):
                P, _, _ = random_ball_polynomial(rng, n, d)
                x = uniform_ball(rng, 1, d)[0]
                sup = float(np.max(np.abs(P(rule.nodes))))
                assert abs(kern.apply(P, x, rule) - float(P(x[None, :])[0])) <= 1e-7 * (1.0 + sup)

    def test_truncated_kernel_also_reproduces(self):
        rng = np.random.default_rng(26)
        d, n = 2, 4
        kern = ReproducingKernel(d, n)
        rule = ball_rule(d, 2 * n + n)
        for _ in range(5):
            P, _, _ = random_ball_polynomial(rng, n, d)
            x = uniform_ball(rng, 1, d)[0]
            sup = float(np.max(np.abs(P(rule.nodes))))
            assert abs(kern.apply(P, x, rule) - float(P(x[None, :])[0])) <= 1e-7 * (1.0 + sup)

    def test_mode_above_cutoff_support_annihilated(self):
        # a pure degree-2n ridge mode lies where the cutoff vanishes, so the
        # operator output equals its projection on lower modes: zero
        d, n = 1, 3
        kern = NeedletKernel(d, n)
        rule = ball_rule(d, 4 * n)
        f = lambda pts: np.array([u_eval(2 * n, d, float(p[0])) for p in np.atleast_2d(pts)])
        for x in (0.0, 0.35, -0.8):
            assert abs(kern.apply(f, np.array([x]), rule)) <= 1e-9

    def test_propagates_bad_integrand(self):
        kern = NeedletKernel(1, 2)
        rule = ball_rule(1, 8)
        with pytest.raises(ValueError, match="node"):
            kern.apply(lambda pts: np.full(len(np.atleast_2d(pts)), np.inf), [0.1], rule)

    def test_boundedness_constant_stable_across_n(self):
        # sup |operator output| / sup |f| for rough-but-continuous inputs stays
        # within one constant across n
        rng = np.random.default_rng(24)
        grid = np.linspace(-1, 1, 401).reshape(-1, 1)
        rule = ball_rule(1, 200)
        ratios = []
        for n in (4, 8, 16):
            kern = NeedletKernel(1, n)
            worst = 0.0
            for trial in range(17):
                P, _, _ = random_ball_polynomial(rng, 3, 1)
                knot = float(rng.uniform(-0.8, 0.8))
                scale = float(rng.uniform(0.5, 2.0))
                f = lambda pts: P(pts) + scale * np.abs(np.atleast_2d(pts)[:, 0] - knot)
                fvals = f(grid)
                kern_vals = kern.pairwise(grid, rule.nodes)
                op_vals = kern_vals @ (rule.weights * f(rule.nodes))
                worst = max(worst, float(np.max(np.abs(op_vals))) / float(np.max(np.abs(fvals))))
            ratios.append(worst)
        assert max(ratios) <= 2.5 * min(ratios)
        assert max(ratios) < 10.0

    def test_near_best_error_decreases(self):
        rule = ball_rule(1, 260)
        grid = np.linspace(-1, 1, 801).reshape(-1, 1)
        f = lambda pts: np.sin(math.pi * np.atleast_2d(pts)[:, 0])
        errors = []
        for n in (2, 4, 8, 16):
            kern = NeedletKernel(1, n)
            op_vals = kern.pairwise(grid, rule.nodes) @ (rule.weights * f(rule.nodes))
            errors.append(float(np.max(np.abs(op_vals - f(grid)))))
        assert all(errors[i + 1] <= errors[i] + 1e-12 for i in range(len(errors) - 1))


class TestLocalization:
    def test_metric_properties(self):
        assert ball_metric([0.3, 0.1], [0.3, 0.1]) == pytest.approx(0.0, abs=1e-7)
        x, y = [0.5, 0.0], [-0.5, 0.0]
        assert ball_metric(x, y) == pytest.approx(ball_metric(y, x), rel=1e-14)
        assert 0.0 <= ball_metric([1.0, 0.0], [-1.0, 0.0]) <= math.pi + 1e-12

    def test_profile_finite_at_coincident_points(self):
        kern = NeedletKernel(2, 8)
        val = kern.localization_profile([0.2, 0.4], [0.2, 0.4], 2)
        assert val > 0.0
        assert np.isfinite(val)

    def test_profile_trend_along_ray(self):
        # the kernel oscillates through nulls, so the normalized profile is
        # not pointwise monotone; the trend along a ray is downward
        kern = NeedletKernel(2, 8)
        x = np.array([0.0, 0.0])
        ss = np.linspace(0.0, 0.9, 48)
        profile = np.array([kern.localization_profile(x, np.array([s, 0.0]), 2) for s in ss])
        rho = np.array([ball_metric(x, np.array([s, 0.0])) for s in ss])
        assert spearmanr(rho, profile).statistic < -0.4
        assert float(np.max(profile[rho > 0.6])) < float(np.max(profile[rho <= 0.3]))

    def test_profile_stability_across_n(self):
        rng = np.random.default_rng(25)
        sups = []
        for n in (8, 16):
            kern = NeedletKernel(2, n)
            worst = 0.0
            for _ in range(200):
                x, y = uniform_ball(rng, 2, 2)
                worst = max(worst, kern.localization_profile(x, y, 2))
            sups.append(worst)
        assert max(sups) <= 2.0 * min(sups)

    def test_rejects_bad_order(self):
        kern = NeedletKernel(2, 4)
        with pytest.raises(ValueError):
            kern.localization_profile([0.1, 0.1], [0.2, 0.2], 0)
