"""Two-sided traveling-wave envelope of a simulated solution.

Barriers ``(1 -/+ log t / t^2) Phi(r - k(t) +/- C; a_t)`` with
``k(t) = c_* t - (N-1) c* log t`` and ``a_t`` the advection for which the
minimal speed equals ``c_* - (N-1) c* / t``.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.optimize import brentq

from ..errors import PmeFrontError, SpeedInversionFailed
from ..wavekit import ModelParams, solve_min_speed, wave_profile


def alpha_of_speed(m: float, c: float, tol: float = 1e-12, max_expand: int = 40) -> float:
    """Invert the decreasing map ``alpha -> c(alpha)``."""
    if not c > 0.0:
        raise SpeedInversionFailed(f"target speed must be positive, got {c!r}")

    def g(a):
        return solve_min_speed(ModelParams(m, a), tol=1e-12).c - c

    try:
        lo, hi = -0.5, 0.5
        g_lo, g_hi = g(lo), g(hi)
        for _ in range(max_expand):
            if g_lo >= 0.0:
                break
            lo, g_lo = 2.0 * lo, g(2.0 * lo)
        for _ in range(max_expand):
            if g_hi <= 0.0:
                break
            hi, g_hi = 2.0 * hi, g(2.0 * hi)
        if g_lo < 0.0 or g_hi > 0.0:
            raise SpeedInversionFailed(f"no advection bracket for speed {c:g} at m={m:g}")
        if g_lo == 0.0:
            return lo
        if g_hi == 0.0:
            return hi
        return float(brentq(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps))
    except SpeedInversionFailed:
        raise
    except (PmeFrontError, ValueError, RuntimeError) as exc:
        raise SpeedInversionFailed(f"speed inversion failed for c={c:g}: {exc}") from exc


@dataclass(frozen=True)
class EnvelopeReport:
    C_lower: float
    C_upper: float
    violations: int
    times: tuple
    alphas: tuple = field(repr=False)
    worst_lower: float = field(repr=False, default=0.0)
    worst_upper: float = field(repr=False, default=0.0)

    @property
    def bounded(self) -> bool:
        return self.violations == 0 and math.isfinite(self.C_lower) and math.isfinite(self.C_upper)


def envelope_check(
    snapshots,
    m: float,
    dim: int,
    c_star: float,
    cstar: float,
    C_max: float = 10.0,
    C_step: float = 0.1,
    M_bar: float = 5.0,
    atol: float = 1e-9,
) -> EnvelopeReport:
    """Smallest grid constants ``C`` for which both barriers hold at every snapshot.

    The lower barrier is tested on ``r >= c_* t - M_bar log t``, the upper one
    on all nodes.  ``violations`` counts sampled points that no ``C <= C_max``
    repairs.
    """
    grid = np.round(C_step * np.arange(int(round(C_max / C_step)) + 1), 12)
    states = sorted(snapshots, key=lambda s: s.t)
    ok_lo = np.ones(grid.size, bool)
    ok_hi = np.ones(grid.size, bool)
    worst_lo = np.zeros(grid.size)
    worst_hi = np.zeros(grid.size)
    alphas = []
    for st in states:
        t = st.t
        if not t > 1.0:
            raise SpeedInversionFailed(f"barriers need t > 1, got {t:g}")
        target = c_star - (dim - 1) * cstar / t
        a = 0.0 if dim == 1 else alpha_of_speed(m, target)
        alphas.append(a)
        prof = wave_profile(ModelParams(m, a))
        k = c_star * t - (dim - 1) * cstar * math.log(t)
        g = math.log(t) / t**2
        r, u = st.r, st.u
        low_zone = r >= c_star * t - M_bar * math.log(t)
        for i, C in enumerate(grid):
            lower = (1.0 - g) * prof.density_at(r[low_zone] - k + C)
            upper = (1.0 + g) * prof.density_at(r - k - C)
            gap_lo = float(np.max(lower - u[low_zone], initial=-np.inf))
            gap_hi = float(np.max(u - upper))
            worst_lo[i] = max(worst_lo[i], gap_lo)
            worst_hi[i] = max(worst_hi[i], gap_hi)
            ok_lo[i] &= gap_lo <= atol
            ok_hi[i] &= gap_hi <= atol
    C_lo = float(grid[np.argmax(ok_lo)]) if ok_lo.any() else math.inf
    C_hi = float(grid[np.argmax(ok_hi)]) if ok_hi.any() else math.inf
    violations = 0
    if not ok_lo.any() or not ok_hi.any():
        # count points violated at the largest constant
        for st, a in zip(states, alphas):
            t = st.t
            prof = wave_profile(ModelParams(m, a))
            k = c_star * t - (dim - 1) * cstar * math.log(t)
            g = math.log(t) / t**2
            r, u = st.r, st.u
            if not ok_lo.any():
                zone = r >= c_star * t - M_bar * math.log(t)
                violations += int(np.sum((1.0 - g) * prof.density_at(r[zone] - k + C_max) - u[zone] > atol))
            if not ok_hi.any():
                violations += int(np.sum(u - (1.0 + g) * prof.density_at(r - k - C_max) > atol))
    return EnvelopeReport(
        C_lo, C_hi, violations, tuple(s.t for s in states), tuple(alphas),
        float(worst_lo[-1]), float(worst_hi[-1]),
    )
