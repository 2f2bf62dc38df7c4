import math

import numpy as np
import pytest

from pmefront.errors import InvalidParameters
from pmefront.wavekit import (
    IntegratorOptions,
    ModelParams,
    Termination,
    bracket_orientation,
    c_prime,
    cstar,
    cstar_profile_details,
    cstar_profile_form,
    dphi_dalpha_sup,
    front_slope,
    gamma,
    integrate_trajectory,
    ode_residual,
    psi_weight,
    reconstruct_profile,
    solve_min_speed,
    wave_profile,
)

M2 = ModelParams(2.0, 0.0)


def c_m2(alpha):
    # at m = 2 the linear trajectory p = k (q - 2) gives c = 2k, 4k^2 + 2 alpha k = 1
    return (math.sqrt(alpha**2 + 4.0) - alpha) / 2.0


class TestModelParams:
    def test_ceiling(self):
        assert ModelParams(3.0).q_max == pytest.approx(1.5)

    @pytest.mark.parametrize("m", [1.0, 0.5, 1.0 + 1e-7, float("nan"), float("inf")])
    def test_rejects_bad_m(self, m):
        with pytest.raises(InvalidParameters):
            ModelParams(m)

    def test_rejects_nonfinite_alpha(self):
        with pytest.raises(InvalidParameters):
            ModelParams(2.0, float("inf"))


class TestGamma:
    def test_m2(self):
        assert gamma(M2, 1.0) == pytest.approx(0.5, abs=1e-15)

    def test_zero_speed(self):
        assert gamma(M2, 0.0) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-15)

    def test_not_the_misprinted_root(self):
        # (c + m alpha + sqrt((c + m alpha)^2 + 4m)) / (2m) would give 1 here
        assert abs(gamma(M2, 1.0) - 1.0) > 0.4


class TestFrontSlope:
    def test_m2(self):
        assert front_slope(M2, 1.0) == pytest.approx(0.5)

    def test_second_derivative_identity(self):
        c = 1.0
        assert front_slope(M2, c) * (-c) == pytest.approx((2 - 1) / 2 * (0 * c - 1))

    def test_vanishes_at_alpha_inverse_speed(self):
        assert front_slope(ModelParams(2.0, 0.5), 2.0) == 0.0

    def test_rejects_nonpositive_speed(self):
        with pytest.raises(InvalidParameters):
            front_slope(M2, 0.0)


class TestTrajectory:
    def test_m2_exact_line(self):
        opts = IntegratorOptions(delta=1e-4 / 2, eps=1e-4 / 2)
        tr = integrate_trajectory(M2, 1.0, opts)
        assert tr.termination is Termination.REACHED_CEILING
        assert np.max(np.abs(tr.p - (tr.q / 2 - 1))) < 1e-6

    def test_classifier_separates_slow_and_fast(self):
        slow = integrate_trajectory(M2, 0.9).termination
        fast = integrate_trajectory(M2, 1.1).termination
        assert {slow, fast} == {Termination.CROSSED_ZERO, Termination.DIVED_BELOW}
        assert bracket_orientation() in (-1, 1)

    @pytest.mark.parametrize("m,alpha", [(1.5, 0.0), (3.0, 0.5), (2.0, -0.5)])
    def test_invariants(self, m, alpha):
        P = ModelParams(m, alpha)
        tr = solve_min_speed(P).trajectory
        assert np.all(np.diff(tr.q) > 0)
        assert np.all(tr.p < 0) and np.all(np.isfinite(tr.p))
        assert tr.termination is Termination.REACHED_CEILING
        d = P.q_max - tr.q_hi
        assert abs(tr.p[-1] + gamma(P, tr.speed) * d) <= 1e-6 * d


class TestMinSpeed:
    def test_m2(self):
        ws = solve_min_speed(M2, tol=1e-8)
        assert ws.c == pytest.approx(1.0, abs=1e-6)
        lo, hi = ws.bracket
        assert lo < ws.c < hi and hi - lo <= 1e-8

    @pytest.mark.parametrize("alpha", [-1.0, -0.3, 0.2, 0.7])
    def test_m2_closed_form_in_alpha(self, alpha):
        assert solve_min_speed(ModelParams(2.0, alpha)).c == pytest.approx(c_m2(alpha), abs=1e-8)

    def test_lipschitz_pair(self):
        d = solve_min_speed(ModelParams(2.0, 0.1)).c - solve_min_speed(ModelParams(2.0, 0.2)).c
        assert 0.0 <= d <= 0.4

    def test_one_sided_difference(self):
        c1 = solve_min_speed(ModelParams(2.0, 1e-3), tol=1e-12).c
        c0 = solve_min_speed(M2, tol=1e-12).c
        assert (c1 - c0) / 1e-3 == pytest.approx(-0.5, abs=1e-2)

    @pytest.mark.parametrize("m", [1.5, 3.0])
    def test_lipschitz_grid(self, m):
        alphas = [-1.0, -0.5, 0.0, 0.5, 1.0]
        cs = [solve_min_speed(ModelParams(m, a), tol=1e-11).c for a in alphas]
        for (a1, c1), (a2, c2) in zip(zip(alphas, cs), zip(alphas[1:], cs[1:])):
            assert -2e-11 <= c1 - c2 <= m * (a2 - a1) + 2e-11

    def test_rejects_bad_tol(self):
        with pytest.raises(InvalidParameters):
            solve_min_speed(M2, tol=0.0)


class TestProfile:
    def test_m2_closed_form(self):
        prof = wave_profile(M2)
        xs = np.linspace(prof.x_min, 0.0, 5001)
        assert np.max(np.abs(prof.density_at(xs) - (1 - np.exp(xs / 2)))) < 1e-5

    @pytest.mark.parametrize("m,alpha", [(1.5, 0.0), (2.0, 0.0), (3.0, -0.5), (3.0, 0.5)])
    def test_shape_invariants(self, m, alpha):
        P = ModelParams(m, alpha)
        prof = wave_profile(P)
        assert np.all(np.diff(prof.x) > 0)
        assert prof.x[-1] == 0.0 and prof.phi[-1] == 0.0 and prof.Phi[-1] == 0.0
        assert np.all(np.diff(prof.phi) < 0)
        np.testing.assert_allclose(prof.Phi, ((m - 1) * prof.phi / m) ** (1 / (m - 1)), rtol=1e-13)
        assert prof.slope_at_front() == pytest.approx(-prof.speed, abs=1e-6)
        assert np.max(np.abs(ode_residual(prof))) < 1e-6
        assert prof.phi[0] >= P.q_max * (1 - 1e-8) - 1e-12

    def test_rejects_unconnected_trajectory(self):
        with pytest.raises(InvalidParameters):
            reconstruct_profile(integrate_trajectory(M2, 0.9))

    def test_zero_ahead_of_front(self):
        prof = wave_profile(M2)
        assert np.all(prof.phi_at(np.array([1e-9, 0.5, 10.0])) == 0.0)
        assert abs(prof.phi_at(np.array([0.0]))[0]) < 1e-15


class TestPsi:
    def setup_method(self):
        self.traj = solve_min_speed(M2).trajectory

    @pytest.mark.parametrize("q,expected", [(1.0, 1.0), (0.5, 1.125), (1.7, 1.7 * 0.3**2)])
    def test_m2_closed_form(self, q, expected):
        assert psi_weight(M2, self.traj, q) == pytest.approx(expected, rel=1e-7)

    def test_vanishes_at_ceiling(self):
        assert psi_weight(M2, self.traj, 2.0 - 1e-6) < 1e-11

    @pytest.mark.parametrize("q", [0.0, 2.0, -1.0, 3.0])
    def test_domain(self, q):
        with pytest.raises(InvalidParameters):
            psi_weight(M2, self.traj, q)


class TestSensitivity:
    def test_m2(self):
        s = c_prime(M2)
        assert s.c_prime == pytest.approx(-0.5, abs=1e-3)
        assert s.quadrature_error < 1e-8

    @pytest.mark.parametrize("m", [1.5, 2.0, 3.0])
    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5])
    def test_range_and_finite_difference(self, m, alpha):
        P = ModelParams(m, alpha)
        s = c_prime(P)
        assert -m < s.c_prime < 0
        h = 1e-3
        fd = (solve_min_speed(P.with_alpha(alpha + h), tol=1e-12).c
              - solve_min_speed(P.with_alpha(alpha - h), tol=1e-12).c) / (2 * h)
        assert s.c_prime == pytest.approx(fd, abs=1e-3)
        psi = np.array([v for _, v in s.psi_samples])
        assert np.all(psi > 0)

    def test_m2_alpha_closed_form(self):
        alpha = 0.3
        exact = (alpha / math.sqrt(alpha**2 + 4) - 1) / 2
        assert c_prime(ModelParams(2.0, alpha)).c_prime == pytest.approx(exact, abs=1e-8)


class TestLogShiftConstant:
    def test_m2(self):
        assert cstar(2.0) == pytest.approx(0.5, abs=2e-3)

    @pytest.mark.parametrize("m", [1.5, 2.0, 3.0])
    def test_two_routes_agree(self, m):
        a, b = cstar(m), cstar_profile_form(m)
        assert a > 0 and b > 0
        assert a == pytest.approx(b, abs=5e-3)

    def test_x_star_m2(self):
        det = cstar_profile_details(2.0)
        assert det.x_star == pytest.approx(2 * math.log(0.5), abs=1e-6)
        assert det.value == pytest.approx(0.5, abs=5e-3)


class TestDphiDalpha:
    def test_stable_under_h_halving(self):
        a = dphi_dalpha_sup(M2, h=1e-3)
        b = dphi_dalpha_sup(M2, h=5e-4)
        assert math.isfinite(a) and abs(a - b) <= 0.1 * a

    def test_bounded_as_range_extends(self):
        a = dphi_dalpha_sup(M2, x_range=(-30.0, 0.0))
        b = dphi_dalpha_sup(M2, x_range=(-90.0, 0.0), n=9001)
        assert b <= 1.1 * a

    def test_zero_at_front(self):
        assert dphi_dalpha_sup(M2, x_range=(-1e-12, 0.0), n=2) < 1e-9

    def test_rejects_bad_inputs(self):
        with pytest.raises(InvalidParameters):
            dphi_dalpha_sup(M2, h=0.0)
        with pytest.raises(InvalidParameters):
            dphi_dalpha_sup(M2, x_range=(-1.0, 1.0))
