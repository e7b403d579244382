"""Gegenbauer machinery: values, normalizations, and derived constants."""

import math

import numpy as np
import pytest

from needlet_lq import quadrature
from needlet_lq.special_functions import (
    BasisConstants,
    addition_kernel_eval,
    gegenbauer_eval,
    gegenbauer_norm,
    gegenbauer_table,
    pochhammer,
    sphere_surface_area,
    u_eval,
    u_table,
    v_coeff,
)


def series_gegenbauer(mu, kmax, t):
    """Independent oracle: Taylor coefficients of (1 - 2tz + z^2)^(-mu)."""
    coeffs = np.zeros(kmax + 1)
    for j in range(kmax + 1):
        base = pochhammer(mu, j) / math.factorial(j)
        for i in range(j + 1):
            k = j + i
            if k <= kmax:
                coeffs[k] += base * math.comb(j, i) * (2.0 * t) ** (j - i) * (-1.0) ** i
    return coeffs


class TestPochhammer:
    def test_direct_products(self):
        assert pochhammer(2, 3) == 24
        assert pochhammer(5, 0) == 1
        assert pochhammer(1, 4) == 24

    def test_matches_gamma_ratio(self):
        for a in (0.5, 1.7, 3.0):
            for k in range(6):
                expected = math.gamma(a + k) / math.gamma(a)
                assert pochhammer(a, k) == pytest.approx(expected, rel=1e-13)

    def test_rejects_negative_order(self):
        with pytest.raises(ValueError):
            pochhammer(2.0, -1)


class TestGegenbauerEval:
    def test_low_degree_values(self):
        assert gegenbauer_eval(1.0, 1, 0.5) == pytest.approx(1.0, abs=1e-15)
        assert gegenbauer_eval(1.0, 2, 0.5) == pytest.approx(0.0, abs=1e-15)
        assert gegenbauer_eval(1.5, 0, -0.3) == 1.0

    def test_recurrence_matches_series_oracle(self):
        rng = np.random.default_rng(10)
        for mu in (0.5, 1.0, 1.5, 2.5):
            for t in rng.uniform(-1.0, 1.0, 50):
                oracle = series_gegenbauer(mu, 8, float(t))
                table = gegenbauer_table(mu, 8, np.asarray(t))
                assert np.max(np.abs(oracle - table) / (1.0 + np.abs(oracle))) < 1e-10

    def test_clamps_small_overshoot(self):
        assert gegenbauer_eval(1.0, 3, 1.0 + 5e-13) == pytest.approx(gegenbauer_eval(1.0, 3, 1.0))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            gegenbauer_eval(0.0, 2, 0.5)
        with pytest.raises(ValueError):
            gegenbauer_eval(1.0, -1, 0.5)
        with pytest.raises(ValueError):
            gegenbauer_eval(1.0, 2, 1.1)


class TestGegenbauerNorm:
    def test_closed_form_values(self):
        assert gegenbauer_norm(0, 1.0) == pytest.approx(math.pi / 2, rel=1e-12)
        assert gegenbauer_norm(0, 0.5) == pytest.approx(2.0, rel=1e-12)

    def test_matches_quadrature_oracle(self):
        for mu in (0.5, 1.0, 2.0):
            alpha = mu - 0.5
            for k in (0, 1, 3, 7, 12):
                rule = quadrature.gauss_jacobi_rule(k + 2, alpha)
                vals = gegenbauer_table(mu, k, rule.nodes)[k]
                integral = float(rule.weights @ vals**2)
                assert integral == pytest.approx(gegenbauer_norm(k, mu), rel=1e-10)

    def test_overflow_reported(self):
        with pytest.raises(OverflowError):
            gegenbauer_norm(2000, 500.0)


class TestOrthonormalFamily:
    def test_u_values(self):
        assert u_eval(0, 2, 0.7) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-12)
        assert u_eval(1, 1, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_orthonormality_to_degree_12(self):
        for d in (1, 2, 3):
            rule = quadrature.gauss_jacobi_rule(13, (d - 1) / 2.0)
            table = u_table(d, 12, rule.nodes)
            gram = (table * rule.weights) @ table.T
            assert np.max(np.abs(gram - np.eye(13))) <= 1e-9


class TestConstants:
    def test_v_values(self):
        assert v_coeff(0, 1) == pytest.approx(math.sqrt(0.5), rel=1e-14)
        assert v_coeff(0, 2) == pytest.approx(math.sqrt(1 / (4 * math.pi)), rel=1e-14)
        assert v_coeff(3, 2) == pytest.approx(math.sqrt(4 / (4 * math.pi)), rel=1e-14)

    def test_v_squared_is_exact_ratio(self):
        for d in (1, 2, 3, 4):
            for k in (0, 1, 5, 20):
                expected = pochhammer(k + 1, d - 1) / (2.0 * (2.0 * math.pi) ** (d - 1))
                assert v_coeff(k, d) ** 2 == pytest.approx(expected, rel=1e-13)

    def test_surface_areas(self):
        assert sphere_surface_area(2) == pytest.approx(2 * math.pi, rel=1e-14)
        assert sphere_surface_area(3) == pytest.approx(4 * math.pi, rel=1e-14)
        assert sphere_surface_area(1) == pytest.approx(2.0, rel=1e-14)

    def test_basis_constants_positive_finite(self):
        for d in range(1, 6):
            consts = BasisConstants.build(d, 64)
            for arr in (consts.h, consts.v, consts.u_at_one):
                assert np.all(arr > 0)
                assert np.all(np.isfinite(arr))

    def test_u_at_one_matches_eval(self):
        consts = BasisConstants.build(2, 10)
        for k in range(11):
            assert consts.u_at_one[k] == pytest.approx(u_eval(k, 2, 1.0), rel=1e-12)


class TestAdditionKernel:
    def test_degree_zero_value(self):
        assert addition_kernel_eval(0, 3, 0.42) == pytest.approx(1 / (4 * math.pi), rel=1e-13)

    def test_odd_degree_at_zero(self):
        assert addition_kernel_eval(1, 3, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_rejects_low_dimension(self):
        with pytest.raises(ValueError, match="d-2"):
            addition_kernel_eval(2, 2, 0.3)

    def test_telescoping_sum_identity(self):
        # parity-graded sums of the zonal kernels rebuild U_k; the constant
        # carries the slice volume vol(B^{d-1})
        rng = np.random.default_rng(11)
        d = 3
        vol = quadrature.ball_volume(d - 1)
        for k in range(7):
            for t in rng.uniform(-1.0, 1.0, 20):
                lhs = sum(addition_kernel_eval(j, d, float(t)) for j in range(k, -1, -2))
                rhs = vol * v_coeff(k, d) ** 2 / u_eval(k, d, 1.0) * u_eval(k, d, float(t))
                assert abs(lhs - rhs) <= 1e-9
