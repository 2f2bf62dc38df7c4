"""Phase-plane formulation of the sharp wavefront.

Along the front the pressure derivative, viewed as a function of the
pressure level, ``p(q) = phi'(phi^{-1}(q))``, solves

    p' = -(c + p) / ((m-1) q) - alpha - F(q) / p,
    F(q) = f(q) / ((m-1) q) = 1 - ((m-1) q / m)^(1/(m-1)),

on ``0 < q < q_max``, with ``p(0) = -c`` at the free boundary and ``p -> 0``
at the saddle ``(q_max, 0)``.  The minimal-speed front is the trajectory
leaving ``(0, -c)`` that lands on the saddle.
"""

from dataclasses import dataclass, field, replace
import enum
import math

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .._accel import njit
from ..errors import InvalidParameters
from .params import ModelParams


def gamma(params: ModelParams, c: float) -> float:
    """Saddle slope: the positive root of ``m b^2 + (c + m alpha) b - 1 = 0``.

    Near ``q_max`` the minimal trajectory behaves like ``-gamma (q_max - q)``.
    """
    m = params.m
    b = c + m * params.alpha
    disc = math.sqrt(b * b + 4.0 * m)
    # cancellation-free form of (-b + disc) / (2m)
    if b >= 0.0:
        return 2.0 / (b + disc)
    return (disc - b) / (2.0 * m)


def front_slope(params: ModelParams, c: float) -> float:
    """``p'(0) = (m-1)/m (1/c - alpha)``, the trajectory slope at the front."""
    if not c > 0.0:
        raise InvalidParameters(f"speed must be positive, got c={c!r}")
    m = params.m
    return (m - 1.0) / m * (1.0 / c - params.alpha)


class Termination(enum.Enum):
    REACHED_CEILING = "ReachedCeiling"
    CROSSED_ZERO = "CrossedZero"
    DIVED_BELOW = "DivedBelow"
    STEP_FAILURE = "StepFailure"


@dataclass(frozen=True)
class IntegratorOptions:
    """Seeds and step controls for :func:`integrate_trajectory`.

    ``delta`` and ``eps`` are relative to ``q_max``: the front seed sits at
    ``q = delta * q_max`` and integration stops at ``q = (1 - eps) q_max``.
    """

    delta: float = 1e-5
    eps: float = 1e-5
    rtol: float = 1e-10
    atol: float = 1e-10
    divergence_margin: float = 0.5
    cone_rtol: float = 0.05
    zero_rtol: float = 1e-3
    h_min: float = 1e-13
    max_steps: int = 200_000

    def __post_init__(self):
        if not (0.0 < self.delta < 0.1 and 0.0 < self.eps < 0.1):
            raise InvalidParameters("seed offsets delta, eps must lie in (0, 0.1)")
        if self.rtol <= 0.0 or self.atol <= 0.0:
            raise InvalidParameters("integration tolerances must be positive")


# kernel exit codes
_END, _CROSSED, _DIVED, _FAILED = 0, 1, 2, 3

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = 9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


@njit
def _rhs(q, p, c, alpha, m, out):
    mm1 = m - 1.0
    F = 1.0 - (mm1 * q / m) ** (1.0 / mm1)
    out[0] = -(c + p) / (mm1 * q) - alpha - F / p
    out[1] = mm1 * F / (p * p)
    out[2] = 1.0 / p


@njit
def _integrate_kernel(c, alpha, m, q0, y0, q_end, rtol, atol, p_floor, zero_slope, q_max, h_min, max_steps):
    """DOPRI5 on y = (p, I, X) from q0 to q_end (either direction) with events.

    I accumulates f(s)/(s p^2) and X accumulates 1/p, both from y0.
    p > -zero_slope * (q_max - q) counts as reaching the q-axis: close to
    p = 0 the slope blows up and steps would otherwise collapse.
    Returns (n_samples, code, q_event, Q, Y).
    """
    Q = np.empty(max_steps + 1)
    Y = np.empty((max_steps + 1, 3))
    k1 = np.empty(3)
    k2 = np.empty(3)
    k3 = np.empty(3)
    k4 = np.empty(3)
    k5 = np.empty(3)
    k6 = np.empty(3)
    k7 = np.empty(3)
    ys = np.empty(3)
    ynew = np.empty(3)
    y = np.empty(3)
    for j in range(3):
        y[j] = y0[j]
    sgn = 1.0 if q_end > q0 else -1.0
    q = q0
    Q[0] = q
    for j in range(3):
        Y[0, j] = y[j]
    n = 1
    span = abs(q_end - q0)
    h = min(0.05 * min(q0, q_max - q0), 0.01 * span)
    h_max = 0.01 * span
    _rhs(q, y[0], c, alpha, m, k1)
    while n <= max_steps:
        if h >= sgn * (q_end - q):
            h = sgn * (q_end - q)
            last = True
        else:
            last = False
        hs = sgn * h
        bad = False
        for j in range(3):
            ys[j] = y[j] + hs * _A21 * k1[j]
        if ys[0] >= 0.0:
            bad = True
        else:
            _rhs(q + _C2 * hs, ys[0], c, alpha, m, k2)
            for j in range(3):
                ys[j] = y[j] + hs * (_A31 * k1[j] + _A32 * k2[j])
            if ys[0] >= 0.0:
                bad = True
        if not bad:
            _rhs(q + _C3 * hs, ys[0], c, alpha, m, k3)
            for j in range(3):
                ys[j] = y[j] + hs * (_A41 * k1[j] + _A42 * k2[j] + _A43 * k3[j])
            if ys[0] >= 0.0:
                bad = True
        if not bad:
            _rhs(q + _C4 * hs, ys[0], c, alpha, m, k4)
            for j in range(3):
                ys[j] = y[j] + hs * (_A51 * k1[j] + _A52 * k2[j] + _A53 * k3[j] + _A54 * k4[j])
            if ys[0] >= 0.0:
                bad = True
        if not bad:
            _rhs(q + _C5 * hs, ys[0], c, alpha, m, k5)
            for j in range(3):
                ys[j] = y[j] + hs * (
                    _A61 * k1[j] + _A62 * k2[j] + _A63 * k3[j] + _A64 * k4[j] + _A65 * k5[j]
                )
            if ys[0] >= 0.0:
                bad = True
        if not bad:
            _rhs(q + hs, ys[0], c, alpha, m, k6)
            for j in range(3):
                ynew[j] = y[j] + hs * (
                    _B1 * k1[j] + _B3 * k3[j] + _B4 * k4[j] + _B5 * k5[j] + _B6 * k6[j]
                )
            if ynew[0] >= 0.0:
                bad = True
        if bad:
            # a stage reached p >= 0: the trajectory is heading into the q-axis
            h *= 0.25
            if h < h_min:
                return n, _CROSSED, q, Q, Y
            continue
        _rhs(q + hs, ynew[0], c, alpha, m, k7)
        err = 0.0
        for j in range(3):
            e = hs * (_E1 * k1[j] + _E3 * k3[j] + _E4 * k4[j] + _E5 * k5[j] + _E6 * k6[j] + _E7 * k7[j])
            sc = atol + rtol * max(abs(y[j]), abs(ynew[j]))
            err += (e / sc) ** 2
        err = math.sqrt(err / 3.0)
        if not math.isfinite(err):
            h *= 0.25
            if h < h_min:
                return n, _FAILED, q, Q, Y
            continue
        if err <= 1.0:
            q_prev = q
            p_prev = y[0]
            q = q_end if last else q + hs
            for j in range(3):
                y[j] = ynew[j]
                k1[j] = k7[j]
            Q[n] = q
            for j in range(3):
                Y[n, j] = y[j]
            n += 1
            if y[0] > -zero_slope * (q_max - q):
                return n, _CROSSED, q, Q, Y
            if y[0] < p_floor:
                # linear location of the crossing of p = p_floor
                q_ev = q_prev + (q - q_prev) * (p_floor - p_prev) / (y[0] - p_prev)
                return n, _DIVED, q_ev, Q, Y
            if last:
                return n, _END, q, Q, Y
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** (-0.2)))
            h = min(h * fac, h_max)
        else:
            h *= max(0.2, 0.9 * err ** (-0.2))
            if h < h_min:
                return n, _FAILED, q, Q, Y
    return n, _FAILED, q, Q, Y


@dataclass
class PhaseTrajectory:
    """Sampled solution ``p(q)`` of the phase-plane ODE at a trial speed.

    ``q`` and ``p`` hold the accepted integrator nodes.  ``I`` and ``x`` are
    the running integrals of ``f(s)/(s p^2)`` (zero at the seed) and of
    ``1/p`` (the profile coordinate, zero at the front).  ``deviation`` is
    ``p(q_hi) + gamma (q_max - q_hi)``, the signed miss of the saddle's
    stable direction at the last sample.  Trajectories built by
    :func:`connect_to_saddle` also record the matching level and the jump in
    ``p`` between the two branches there.
    """

    params: ModelParams
    speed: float
    q: np.ndarray
    p: np.ndarray
    termination: Termination
    termination_q: float
    deviation: float
    options: IntegratorOptions
    I: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    dp: np.ndarray = field(repr=False)
    match_q: float = math.nan
    match_gap: float = math.nan

    @property
    def samples(self):
        return list(zip(self.q.tolist(), self.p.tolist()))

    @property
    def q_lo(self) -> float:
        return float(self.q[0])

    @property
    def q_hi(self) -> float:
        return float(self.q[-1])

    @property
    def side(self) -> int:
        """+1 if the trajectory passes above the saddle connection, -1 below."""
        if self.termination is Termination.CROSSED_ZERO:
            return 1
        if self.termination is Termination.DIVED_BELOW:
            return -1
        if self.termination is Termination.REACHED_CEILING:
            return 1 if self.deviation > 0.0 else -1
        raise ValueError("a failed trajectory has no side")

    def gamma(self) -> float:
        return gamma(self.params, self.speed)

    def p_spline(self) -> CubicHermiteSpline:
        return CubicHermiteSpline(self.q, self.p, self.dp)

    def I_spline(self) -> CubicHermiteSpline:
        m = self.params.m
        F = 1.0 - ((m - 1.0) * self.q / m) ** (1.0 / (m - 1.0))
        return CubicHermiteSpline(self.q, self.I, (m - 1.0) * F / self.p**2)


def phase_rhs(params: ModelParams, c: float, q, p):
    """Right-hand side of the phase-plane ODE, vectorised over ``q, p``."""
    m, alpha = params.m, params.alpha
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    F = 1.0 - ((m - 1.0) * q / m) ** (1.0 / (m - 1.0))
    return -(c + p) / ((m - 1.0) * q) - alpha - F / p


def integrate_trajectory(
    params: ModelParams, c: float, opts: IntegratorOptions | None = None
) -> PhaseTrajectory:
    """Shoot from the front seed ``(delta, -c + p'(0) delta)`` toward the saddle."""
    opts = opts or IntegratorOptions()
    s0 = front_slope(params, c)
    m, alpha, q_max = params.m, params.alpha, params.q_max
    q0 = opts.delta * q_max
    q_end = (1.0 - opts.eps) * q_max
    p0 = -c + s0 * q0
    if p0 >= 0.0:
        raise InvalidParameters(f"front seed p = {p0:g} is not negative; reduce delta")
    # x(q0) = int_0^q0 ds / (-c + s0 s)
    x0 = math.log1p(-s0 * q0 / c) / s0 if s0 != 0.0 else -q0 / c
    y0 = np.array([p0, 0.0, x0])
    p_floor = -(1.0 + opts.divergence_margin) * c
    n, code, q_ev, Q, Y = _integrate_kernel(
        float(c), alpha, m, q0, y0, q_end, opts.rtol, opts.atol, p_floor,
        opts.zero_rtol * gamma(params, c), q_max, opts.h_min * q_max, int(opts.max_steps),
    )
    q = Q[:n].copy()
    Yn = Y[:n]
    if code == _DIVED:
        # keep samples with p above the floor; the event marks the dive
        keep = Yn[:, 0] >= p_floor
        keep[0] = True
        q, Yn = q[keep], Yn[keep]
    p, I, x = Yn[:, 0].copy(), Yn[:, 1].copy(), Yn[:, 2].copy()
    g = gamma(params, c)
    deviation = float(p[-1] + g * (q_max - q[-1]))
    if code == _END:
        if abs(deviation) <= opts.cone_rtol * g * (q_max - q[-1]):
            term = Termination.REACHED_CEILING
        elif deviation > 0.0:
            term = Termination.CROSSED_ZERO
        else:
            term = Termination.DIVED_BELOW
        q_term = float(q[-1])
    elif code == _CROSSED:
        term, q_term = Termination.CROSSED_ZERO, float(q_ev)
    elif code == _DIVED:
        term, q_term = Termination.DIVED_BELOW, float(q_ev)
    else:
        term, q_term = Termination.STEP_FAILURE, float(q_ev)
    dp = phase_rhs(params, c, q, p)
    return PhaseTrajectory(
        params=params, speed=float(c), q=q, p=p, termination=term,
        termination_q=q_term, deviation=deviation, options=opts, I=I, x=x, dp=dp,
    )


def connect_to_saddle(traj: PhaseTrajectory, match_frac: float = 0.5) -> PhaseTrajectory:
    """Replace the tail of a front-seeded trajectory by the saddle branch.

    Forward integration is unstable near the saddle, so even a speed
    converged to round-off leaves the tail drifting off the connection.
    The branch leaving the saddle along its stable direction is integrated
    back down to ``match_frac * q_max`` and spliced onto the front branch at
    the last front node below that level.
    """
    params, c, opts = traj.params, traj.speed, traj.options
    q_max = params.q_max
    below = np.nonzero(traj.q <= match_frac * q_max)[0]
    if below.size < 2:
        raise InvalidParameters("front branch does not reach the matching level")
    i = int(below[-1])
    q_match = float(traj.q[i])
    g = gamma(params, c)
    q_top = (1.0 - opts.eps) * q_max
    y0 = np.array([-g * (q_max - q_top), 0.0, 0.0])
    n, code, q_ev, Q, Y = _integrate_kernel(
        float(c), params.alpha, params.m, q_top, y0, q_match, opts.rtol, opts.atol,
        -1e300, 0.0, q_max, opts.h_min * q_max, int(opts.max_steps),
    )
    if code != _END:
        return replace(traj, termination=Termination.STEP_FAILURE, termination_q=float(q_ev))
    qb = Q[:n][::-1]
    Yb = Y[:n][::-1]
    gap = float(Yb[0, 0] - traj.p[i])
    I_b = Yb[:, 1] - Yb[0, 1] + traj.I[i]
    x_b = Yb[:, 2] - Yb[0, 2] + traj.x[i]
    q = np.concatenate([traj.q[:i], qb])
    p = np.concatenate([traj.p[:i], Yb[:, 0]])
    I = np.concatenate([traj.I[:i], I_b])
    x = np.concatenate([traj.x[:i], x_b])
    deviation = float(p[-1] + g * (q_max - q[-1]))
    return replace(
        traj, q=q, p=p, I=I, x=x, dp=phase_rhs(params, c, q, p),
        termination=Termination.REACHED_CEILING, termination_q=float(q[-1]),
        deviation=deviation, match_q=q_match, match_gap=gap,
    )
