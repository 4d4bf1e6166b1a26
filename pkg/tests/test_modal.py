import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from flexpath.beam import characteristic_roots, modal_analysis, mode_shape, resonance_proximity
from flexpath.beam.modal import (
    characteristic_function,
    discrete_frequencies,
    mode_shape_raw,
    scaled_characteristic_function,
)
from flexpath.errors import InvalidArgumentError
from flexpath.trajectory import constant, rest_to_rest, spin_hold

import oracles
import scenarios


class TestRoots:
    def test_against_extended_precision(self):
        ref = oracles.mp_roots(12)
        got = characteristic_roots(12)
        for b, r in zip(got, ref):
            assert abs(b - float(r)) < 1e-12 * float(r)

    def test_first_two_roots_six_decimals(self):
        b = characteristic_roots(2)
        assert round(b[0], 6) == 1.875104
        assert round(b[1], 6) == 4.694091

    def test_strictly_increasing(self):
        b = characteristic_roots(12)
        assert all(x < y for x, y in zip(b, b[1:]))

    def test_approach_odd_half_pi(self):
        gaps = [abs(b - (2 * k - 1) * math.pi / 2)
                for k, b in enumerate(characteristic_roots(6), start=1)]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))

    def test_scaled_residual_small(self):
        for b in characteristic_roots(12):
            assert abs(scaled_characteristic_function(b)) < 1e-14

    @pytest.mark.parametrize("n", [0, 13, 2.5])
    def test_range(self, n):
        with pytest.raises(InvalidArgumentError):
            characteristic_roots(n)


class TestModeShape:
    def test_root_values(self):
        b = characteristic_roots(1)[0]
        assert mode_shape(b, 0.0) == 0.0
        assert mode_shape(b, 1.0) == pytest.approx(1.0)

    def test_matches_raw_formula(self):
        b = characteristic_roots(3)[2]
        x = np.linspace(0, 1, 11)
        assert np.allclose(mode_shape(b, x), oracles.mode_shape_sympy_free(b, x), atol=1e-12)

    def test_first_mode_boundary_conditions_by_differences(self):
        b = characteristic_roots(1)[0]
        f = lambda x: mode_shape(b, x)  # noqa: E731
        assert abs(f(0.0)) <= 1e-6
        assert abs(oracles.d1_central(f, 0.0, 2e-3)) <= 1e-6
        assert abs(oracles.d2_central(f, 1.0, 2e-3)) <= 1e-6
        assert abs(oracles.d3_central(f, 1.0, 4e-3)) <= 1e-6

    @pytest.mark.parametrize("k", range(12))
    def test_free_end_analytic(self, k):
        # cancellation between cosh-sized terms leaves about eps * cosh(b) * b^d
        b = characteristic_roots(12)[k]
        tol = 1e-14 * math.cosh(b)
        assert mode_shape(b, 0.0, 1) == 0.0
        assert abs(mode_shape(b, 1.0, 2)) <= tol * b**2
        assert abs(mode_shape(b, 1.0, 3)) <= tol * b**3

    @pytest.mark.parametrize("d", [1, 2, 3, 4])
    def test_analytic_derivatives(self, d):
        b = characteristic_roots(2)[1]
        x = np.linspace(0.1, 0.9, 5)
        h = 1e-5
        fd_ = (mode_shape_raw(b, x + h, d - 1) - mode_shape_raw(b, x - h, d - 1)) / (2 * h)
        assert np.allclose(mode_shape_raw(b, x, d), fd_, rtol=1e-6, atol=1e-6)

    def test_fourth_derivative_is_beta4_times_shape(self):
        b = characteristic_roots(3)[2]
        x = np.linspace(0, 1, 9)
        assert np.allclose(mode_shape_raw(b, x, 4), b**4 * mode_shape_raw(b, x), atol=1e-9)

    def test_orthogonality(self):
        # tip-normalised shapes, trapezoid rule on 2001 points
        x = np.linspace(0, 1, 2001)
        shapes = [mode_shape(b, x) for b in characteristic_roots(6)]
        for i in range(6):
            for j in range(i + 1, 6):
                assert abs(np.trapezoid(shapes[i] * shapes[j], x)) <= 1e-6

    def test_orthogonality_gauss(self):
        # the trapezoid residue above is quadrature error; Gauss-Legendre removes it down to roundoff
        xg, wg = np.polynomial.legendre.leggauss(80)
        xg = 0.5 * (xg + 1)
        shapes = [mode_shape(b, xg) for b in characteristic_roots(6)]
        for i in range(6):
            for j in range(i + 1, 6):
                assert abs(0.5 * np.sum(wg * shapes[i] * shapes[j])) < 1e-9

    def test_beta_positive(self):
        with pytest.raises(InvalidArgumentError):
            mode_shape(0.0, 0.5)


class TestModalAnalysis:
    def test_unit_rod_frequency(self, unit_fem):
        res = modal_analysis(unit_fem, 1)
        assert res.omegas[0] == pytest.approx(3.51602, abs=1e-5)
        assert res.natural_rates[0] == pytest.approx(res.omegas[0])

    def test_fem_fifty_elements(self):
        m = scenarios.unit_model(51, "fem")
        res = modal_analysis(m, 3)
        assert abs(res.relative_deviation[0]) <= 1e-4

    def test_fd_converges(self):
        devs = [abs(modal_analysis(scenarios.unit_model(n, "fd"), 1).relative_deviation[0])
                for n in (26, 51, 101)]
        assert devs[0] > devs[1] > devs[2]

    def test_time_scale(self, steel_strip):
        T = 0.7
        res = modal_analysis(steel_strip, 2, T=T)
        assert res.natural_rates[1] == pytest.approx(res.omegas[1] * T)

    def test_mode_shape_clamp(self, unit_fem):
        res = modal_analysis(unit_fem, 4)
        assert np.all(res.mode_shapes[:, 0] == 0.0)
        for b in res.betas:
            f = lambda x, b=b: mode_shape(b, x)  # noqa: E731
            assert abs(oracles.d1_central(f, 0.0, 1e-3)) < 1e-8

    def test_discrete_sorted(self, unit_fem):
        f = discrete_frequencies(unit_fem, 5)
        assert all(a < b for a, b in zip(f, f[1:]))

    def test_literal_residuals_reported(self, unit_fem):
        res = modal_analysis(unit_fem, 3)
        for b, r in zip(res.betas, res.residuals):
            assert r == abs(characteristic_function(b))
        assert max(res.residuals) < 1e-10


class TestResonanceProximity:
    def test_at_rest_gap_is_one(self, unit_fem):
        res = modal_analysis(unit_fem, 3)
        gaps = resonance_proximity(constant(0.0, 1.0), res)
        assert [g.gap for g in gaps] == [1.0, 1.0, 1.0]
        assert not any(g.flagged for g in gaps)

    def test_peak_rate_on_omega1(self, unit_fem):
        res = modal_analysis(unit_fem, 2)
        om = res.omegas[0]
        # quintic peak rate is 15/8 * d / T
        T = 2.0
        traj = rest_to_rest("quintic", 0.0, om * T * 8 / 15, 0.0, T)
        g1 = resonance_proximity(traj, res)[0]
        assert g1.gap == pytest.approx(0.0, abs=1e-9)
        assert g1.flagged
        assert g1.time == pytest.approx(1.0, abs=1e-3)

    def test_crossing(self, unit_fem):
        res = modal_analysis(unit_fem, 1)
        traj = spin_hold(2 * res.omegas[0], 1.0, 1.0)
        g = resonance_proximity(traj, res)[0]
        assert g.gap == 0.0
        assert abs(traj.theta.evaluate(g.time, 1)) == pytest.approx(res.omegas[0], rel=1e-10)

    @given(st.floats(0.05, 3.0))
    def test_hold_gap(self, frac):
        res = modal_analysis(scenarios.unit_model(11), 1)
        om = res.omegas[0]
        traj = spin_hold(frac * om, 0.5, 0.5)
        g = resonance_proximity(traj, res)[0]
        expect = 0.0 if frac >= 1 else 1 - frac
        assert g.gap == pytest.approx(expect, abs=1e-9)

    def test_dynamic_resonance(self):
        assert scenarios.spin_growth(1.0) >= 5 * scenarios.spin_growth(0.5)
