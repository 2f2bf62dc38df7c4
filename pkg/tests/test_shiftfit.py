import math

import numpy as np
import pytest

from pmefront.errors import FrontTooClose, IllConditioned, InvalidParameters, SpeedInversionFailed
from pmefront.pmesim import SimState
from pmefront.shiftfit import (
    alpha_of_speed,
    compare_profile,
    delta_B,
    envelope_check,
    fit_shift,
    fit_shift_pinned,
    shift_model,
)
from pmefront.wavekit import ModelParams, cstar, wave_profile

T = np.linspace(50.0, 400.0, 3501)


def synthetic(c, B, r0, t=T):
    return t, c * t - B * np.log(t) + r0


@pytest.fixture(scope="module")
def profile():
    return wave_profile(ModelParams(2.0, 0.0))


def sampled_state(profile, t, k, offset, dr=0.05, r_max=None, dim=2):
    r_max = r_max if r_max is not None else k + 40.0
    r = np.arange(int(round(r_max / dr)) + 1) * dr
    u = profile.density_at(r - k - offset)
    u[-1] = 0.0
    return SimState(t, u, dr, 2.0, dim)


class TestFit:
    def test_exact_recovery(self):
        f = fit_shift(synthetic(1.0, 0.5, 3.0), (50.0, 400.0))
        assert f.c_hat == pytest.approx(1.0, abs=1e-10)
        assert f.B_hat == pytest.approx(0.5, abs=1e-10)
        assert f.r0_hat == pytest.approx(3.0, abs=1e-10)
        assert f.rms_residual < 1e-10 and f.rows == T.size

    def test_no_log_term(self):
        assert fit_shift(synthetic(0.9, 0.0, -2.0), (50.0, 400.0)).B_hat == pytest.approx(0.0, abs=1e-10)

    def test_pinned(self):
        f = fit_shift_pinned(synthetic(1.0, 0.5, 3.0), 1.0, (50.0, 400.0))
        assert (f.B_hat, f.r0_hat) == pytest.approx((0.5, 3.0), abs=1e-10)

    def test_default_window(self):
        f = fit_shift(synthetic(1.0, 0.5, 3.0))
        assert f.window == (100.0, 400.0)

    def test_too_few_rows(self):
        t = np.array([100.0, 150.0, 200.0])
        with pytest.raises(IllConditioned):
            fit_shift((t, t), (50.0, 400.0))

    def test_collinear_window(self):
        t = np.linspace(150.0, 152.0, 200)
        with pytest.raises(IllConditioned):
            fit_shift((t, t - 0.5 * np.log(t)), (150.0, 152.0))

    def test_bad_window(self):
        with pytest.raises(InvalidParameters):
            fit_shift(synthetic(1, 0, 0), (200.0, 100.0))
        with pytest.raises(InvalidParameters):
            fit_shift(synthetic(1, 0, 0), (0.0, 100.0))

    def test_report_keys(self):
        rep = fit_shift(synthetic(1.0, 0.5, 3.0), (50.0, 400.0)).report(0.5)
        assert set(rep) == {"c_hat", "B_hat", "r0_hat", "rms", "predicted_B", "ratio", "window"}
        assert rep["ratio"] == pytest.approx(1.0, abs=1e-9)

    def test_delta_B(self):
        assert delta_B(synthetic(1.0, 1.0, 2.0), synthetic(1.0, 0.5, 2.0), (50.0, 400.0)) == pytest.approx(0.5, abs=1e-10)
        s = synthetic(1.0, 0.3, 1.0)
        assert delta_B(s, s, (50.0, 400.0)) == 0.0


class TestCompare:
    def test_self_comparison(self, profile):
        t = 100.0
        k = shift_model(t, 1.0, 0.5, 2)
        st = sampled_state(profile, t, k, 2.0)
        cmp = compare_profile(st, profile, k)
        assert cmp.shift == pytest.approx(2.0, abs=1e-9)
        assert cmp.sup_error < 1e-12

    def test_offset_invariance(self, profile):
        t = 100.0
        k = shift_model(t, 1.0, 0.5, 2)
        st = sampled_state(profile, t, k, 1.2345, r_max=k + 60.0)
        a = compare_profile(st, profile, k)
        # move the snapshot coordinate and the scan centre by the same amount
        shift = 7.0
        u = np.concatenate([np.zeros(int(round(shift / st.dr))), st.u])
        moved = SimState(t, u, st.dr, st.m, st.dim)
        b = compare_profile(moved, profile, k + shift)
        assert b.sup_error == pytest.approx(a.sup_error, abs=1e-12)
        assert b.shift == pytest.approx(a.shift, abs=1e-9)

    def test_front_too_close(self, profile):
        t = 50.0
        k = shift_model(t, 1.0, 0.5, 2)
        st = sampled_state(profile, t, k, 0.0, r_max=k + 3.0)
        with pytest.raises(FrontTooClose):
            compare_profile(st, profile, k)

    def test_shift_model(self):
        assert shift_model(math.e, 1.0, 0.5, 3) == pytest.approx(math.e - 1.0)


class TestEnvelope:
    def test_alpha_of_speed_closed_form(self):
        # at m = 2, c(alpha) = (sqrt(alpha^2 + 4) - alpha) / 2 inverts to alpha = (1 - c^2) / c
        for c in (0.8, 0.99, 1.3):
            assert alpha_of_speed(2.0, c) == pytest.approx((1 - c * c) / c, abs=1e-9)

    def test_alpha_at_limit_speed(self):
        assert abs(alpha_of_speed(2.0, 1.0)) < 1e-9

    def test_alpha_rejects(self):
        with pytest.raises(SpeedInversionFailed):
            alpha_of_speed(2.0, -1.0)

    def test_shift_identity_limit_profile(self, profile):
        # N = 1: the barriers use the alpha = 0 profile at every t
        t = 1e4
        k = shift_model(t, 1.0, 0.5, 1)
        st = sampled_state(profile, t, k, 1.0, dim=1)
        rep = envelope_check([st], 2.0, 1, 1.0, 0.5)
        assert rep.C_upper == 1.0 and rep.C_lower == 0.0 and rep.violations == 0

    def test_shift_identity_moving_profile(self):
        t = 1e4
        cs = cstar(2.0)
        prof = wave_profile(ModelParams(2.0, alpha_of_speed(2.0, 1.0 - cs / t)))
        k = shift_model(t, 1.0, cs, 2)
        st = sampled_state(prof, t, k, 1.0)
        rep = envelope_check([st], 2.0, 2, 1.0, cs)
        assert rep.C_upper == 1.0 and rep.C_lower == 0.0 and rep.violations == 0

    def test_unbounded_reported(self, profile):
        t = 1e4
        k = shift_model(t, 1.0, 0.5, 1)
        st = sampled_state(profile, t, k, 12.0, dr=0.05, dim=1)
        rep = envelope_check([st], 2.0, 1, 1.0, 0.5)
        assert math.isinf(rep.C_upper) and rep.violations > 0 and not rep.bounded


@pytest.mark.slow
class TestOnReferenceRuns:
    def test_fit_n2(self, reference_runs):
        f = fit_shift(reference_runs.result(2).series, (50.0, 200.0))
        assert abs(f.B_hat - 0.5) <= 0.25 * 0.5

    def test_profile_converges(self, reference_runs, profile):
        res = reference_runs.result(2)
        cs = cstar(2.0)
        err = {t: compare_profile(res.snapshots[t], profile, shift_model(t, 1.0, cs, 2)).sup_error
               for t in (50.0, 200.0)}
        assert err[200.0] < err[50.0] and err[200.0] <= 0.05

    def test_n1_b_zero(self, reference_runs):
        assert abs(fit_shift(reference_runs.result(1).series, (50.0, 200.0)).B_hat) < 0.05
