import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flexpath.errors import InvalidArgumentError, NumericalFailureError, OutOfRangeError
from flexpath.plate import (
    PlateModel,
    _assemble,
    bending_stiffness,
    free_edge_moment,
    moments,
    plate_strains,
    plate_stresses,
    solve_plate_static,
)

import oracles
import scenarios


def plate(**kw):
    base = dict(E=1.0, nu=0.3, h=0.1, rho=1.0, a=1.0, b=1.0, nx=17, ny=17)
    base.update(kw)
    return PlateModel(**base)


class TestBendingStiffness:
    def test_degenerate_poisson(self):
        assert bending_stiffness(3.0, 0.0, 1.0) == 2.0

    def test_steel_value(self):
        ref = 2 * (5e-4) ** 3 * 2e11 / (3 * (1 - 0.09))
        assert bending_stiffness(2e11, 0.3, 5e-4) == pytest.approx(ref, rel=1e-15)
        assert ref == pytest.approx(18.315, abs=1e-3)

    def test_cubic_in_thickness(self):
        assert bending_stiffness(1.0, 0.2, 0.2) / bending_stiffness(1.0, 0.2, 0.1) == pytest.approx(8.0)

    @pytest.mark.parametrize("nu", [-0.1, 0.5, 0.7])
    def test_poisson_range(self, nu):
        with pytest.raises(InvalidArgumentError):
            bending_stiffness(1.0, nu, 0.1)


class TestModel:
    @pytest.mark.parametrize("kw", [dict(nu=0.0), dict(nu=0.5), dict(E=0.0), dict(h=-1.0),
                                    dict(a=0.0), dict(nx=8), dict(ny=12.5), dict(k=-1.0),
                                    dict(clamped_edges=set()), dict(clamped_edges={"north"}),
                                    dict(free_edge="simply")])
    def test_rejects(self, kw):
        with pytest.raises(InvalidArgumentError):
            plate(**kw)

    def test_grid(self):
        m = plate(a=2.0, nx=9)
        X, Y = m.grid()
        assert X.shape == (9, 17) and X[-1, 0] == 2.0 and Y[0, -1] == 1.0
        assert m.dx == 0.25

    def test_load_shape(self):
        with pytest.raises(InvalidArgumentError):
            solve_plate_static(plate(), np.ones((3, 3)))


class TestStrains:
    def test_zero(self):
        s = plate_strains(plate(), np.zeros((17, 17)), 0.05)
        assert all(not np.any(c) for c in s)

    def test_plane_membrane_only(self):
        m = plate()
        X, Y = m.grid()
        al, be = 0.3, -0.7
        s = plate_strains(m, al * X + be * Y, 0.0)
        assert np.allclose(s.e11, al**2 / 2, atol=1e-14)
        assert np.allclose(s.e22, be**2 / 2, atol=1e-14)
        assert np.allclose(s.e12, al * be / 2, atol=1e-14)

    def test_hand_substitution(self):
        m = plate(a=2.0, nx=9, h=0.1)
        X, _ = m.grid()
        s = plate_strains(m, X**2, m.h)
        assert s.e11[4, 3] == pytest.approx(1.8, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeError):
            plate_strains(plate(), np.zeros((17, 17)), 0.11)


class TestStresses:
    def test_zero(self):
        s = plate_stresses((0.0, 0.0, 0.0), 1.0, 0.3)
        assert (s.s11, s.s22, s.s12) == (0.0, 0.0, 0.0)

    def test_identity_without_poisson(self):
        s = plate_stresses((1.0, 0.0, 0.0), 1.0, 0.0)
        assert s.s11 == 1.0 and s.s22 == 0.0

    def test_equibiaxial(self):
        s = plate_stresses((1.0, 1.0, 0.0), 1.0, 0.3)
        assert s.s11 == pytest.approx(1.3 / 0.91, rel=1e-15)
        assert s.s11 == pytest.approx(1.4286, abs=1e-4)

    def test_shear_entry_on_e12(self):
        s = plate_stresses((0.0, 0.0, 1.0), 2.0, 0.25)
        assert s.s12 == pytest.approx(2.0 * 0.75 / (1 - 0.0625))


class TestMoments:
    def test_zero(self):
        M = moments(plate(), np.zeros((17, 17)))
        assert all(not np.any(c) for c in M)

    def test_parabola(self):
        m = plate()
        X, _ = m.grid()
        M = moments(m, X**2)
        assert np.allclose(M.M11, -2 * m.D, rtol=1e-12)
        assert np.allclose(M.M22, -2 * m.nu * m.D, rtol=1e-12)
        assert np.allclose(M.M12, 0.0, atol=1e-12)

    def test_gauss_quadrature_through_thickness(self):
        m = plate(nu=0.27, h=0.05)
        X, Y = m.grid()
        w = 0.01 * np.sin(2 * X) * np.cosh(Y) + 0.003 * X * Y**2
        zg, wg = np.polynomial.legendre.leggauss(21)
        acc = [np.zeros_like(w) for _ in range(3)]
        for z, wt in zip(m.h * zg, m.h * wg):
            s = plate_stresses(plate_strains(m, w, z), m.E, m.nu)
            for a, c in zip(acc, s):
                a += wt * c * z
        M = moments(m, w)
        for a, c in zip(acc, M):
            assert np.abs(a - c).max() <= 1e-10 * np.abs(c).max()


class TestSolve:
    def test_zero_load(self):
        sol = solve_plate_static(plate(), 0.0)
        assert not np.any(sol.w0)

    def test_clamped_edges_exactly_zero(self):
        sol = solve_plate_static(plate(), np.random.default_rng(0).normal(size=(17, 17)))
        w = sol.w0
        assert np.all(w[0] == 0) and np.all(w[-1] == 0)
        assert np.all(w[:, 0] == 0) and np.all(w[:, -1] == 0)

    def test_clamped_edge_zero_with_free_edges(self):
        sol = scenarios.plate_cantilever(17)
        assert np.all(sol.w0[0] == 0) and np.abs(sol.w0[-1]).min() > 0

    def test_downward_load_deflects_down(self):
        sol = solve_plate_static(plate(), 1.0)
        assert sol.w0[8, 8] < 0

    def test_doubling(self):
        m = plate()
        a, b = solve_plate_static(m, 1.0).w0, solve_plate_static(m, 2.0).w0
        assert np.abs(b - 2 * a).max() <= 1e-12 * np.abs(b).max()

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 2**31 - 1), st.floats(-10, 10), st.floats(-10, 10))
    def test_superposition(self, seed, alpha, beta):
        m = plate(nx=13, ny=11, a=1.2)
        rng = np.random.default_rng(seed)
        q1, q2 = rng.normal(size=(2, 13, 11))
        lhs = solve_plate_static(m, alpha * q1 + beta * q2).w0
        rhs = alpha * solve_plate_static(m, q1).w0 + beta * solve_plate_static(m, q2).w0
        scale = max(np.abs(lhs).max(), np.abs(rhs).max(), 1e-300)
        assert np.abs(lhs - rhs).max() <= 1e-10 * scale

    def test_foundation_stiffens(self):
        soft = solve_plate_static(plate(), 1.0).w0[8, 8]
        stiff = solve_plate_static(plate(k=1e3), 1.0).w0[8, 8]
        assert abs(stiff) < abs(soft)

    def test_recovered_fields(self):
        m = plate()
        sol = solve_plate_static(m, 1.0)
        M = moments(m, sol.w0)
        assert np.array_equal(sol.M11, M.M11)
        top = plate_stresses(plate_strains(m, sol.w0, m.h), m.E, m.nu)
        assert np.array_equal(sol.sigma_top.s11, top.s11)

    def test_self_weight(self):
        assert plate(rho=7850.0, h=5e-4).self_weight(10.0) == pytest.approx(2 * 5e-4 * 7850 * 10)


class TestClampedSquare:
    def test_coefficient_at_129(self):
        c = scenarios.clamped_square_coeff(129)
        assert abs(c - oracles.CLAMPED_SQUARE_COEFF) <= 0.02 * oracles.CLAMPED_SQUARE_COEFF
        assert c == pytest.approx(oracles.CLAMPED_SQUARE_COEFF_SERIES, rel=0.02)

    def test_convergence_order(self):
        c = [scenarios.clamped_square_coeff(n) for n in (17, 33, 65, 129)]
        diffs = np.abs(np.diff(c))
        orders = np.log2(diffs[:-1] / diffs[1:])
        assert np.all((orders >= 1.7) & (orders <= 2.3)), orders


class TestFreeEdges:
    def test_laplacian_conditions_rejected(self):
        with pytest.raises(NumericalFailureError, match="classical"):
            solve_plate_static(plate(clamped_edges={"left"}), 1.0)

    def test_laplacian_conditions_rank_deficient(self):
        m = plate(nx=9, ny=9, clamped_edges={"left"})
        A, _, _ = _assemble(m, np.ones((9, 9)))
        A = A.toarray()
        assert np.linalg.matrix_rank(A) < A.shape[0]
        mc = plate(nx=9, ny=9, clamped_edges={"left"}, free_edge="classical")
        Ac = _assemble(mc, np.ones((9, 9)))[0].toarray()
        assert np.linalg.matrix_rank(Ac) == Ac.shape[0]

    def test_cantilever_between_beam_bounds(self):
        # a clamped-free strip sits between the beam (1/8) and the plate-strip (1/(8(1-nu^2))) limits
        sol = scenarios.plate_cantilever(65)
        m = sol.model
        c = abs(sol.w0[-1, m.ny // 2]) * m.D
        assert 1 / 8 < c < 1 / (8 * (1 - m.nu**2))

    @pytest.mark.parametrize("clamped", [{"left"}, {"left", "right"}, {"left", "bottom", "top"}])
    def test_moment_residual_order(self, clamped):
        res = []
        for n in (17, 33, 65):
            m = plate(nx=n, ny=n, clamped_edges=clamped, free_edge="classical")
            res.append(free_edge_moment(solve_plate_static(m, 1.0)))
        orders = oracles.log2_orders(res)
        assert np.all(orders >= 1.5), orders

    def test_all_clamped_has_no_residual(self):
        assert free_edge_moment(solve_plate_static(plate(), 1.0)) == 0.0
