"""Speed sensitivity ``c'(alpha)`` and the log-shift constant.

The weight

    Psi(q) = q^(1/(m-1)) exp( 1/(m-1) int_q^1 f(s) / (s p(s)^2) ds )

behaves like ``q^(1/(m-1))`` at the front and like ``(q_max - q)^kappa``,
``kappa = 1/(m gamma^2)``, at the saddle, so both integrals in

    c'(alpha) = -(m-1) int Psi dq / int Psi / q dq

are taken with algebraic endpoint weights and a smooth remainder.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import integrate

from ..errors import InvalidParameters
from .params import ModelParams
from .phase import IntegratorOptions, PhaseTrajectory, front_slope, gamma
from .speed import solve_min_speed


@dataclass(frozen=True)
class Sensitivity:
    params: ModelParams
    c: float
    c_prime: float
    psi_samples: list
    quadrature_error: float

    @property
    def alpha(self) -> float:
        return self.params.alpha


def _extended_p(traj: PhaseTrajectory):
    """``p`` on all of (0, q_max): front Taylor data, spline, saddle asymptote."""
    params, c = traj.params, traj.speed
    q_max = params.q_max
    spline = traj.p_spline()
    s0 = front_slope(params, c)
    q_lo, q_hi = traj.q_lo, traj.q_hi
    # scale of the saddle asymptote so the tail joins the last sample
    tail = traj.p[-1] / (q_max - q_hi)

    def p_of(s):
        if s < q_lo:
            return -c + s0 * s
        if s > q_hi:
            return tail * (q_max - s)
        return float(spline(s))

    return p_of


def psi_weight(params: ModelParams, traj: PhaseTrajectory, q: float) -> float:
    """``Psi(q)`` by adaptive quadrature of the inner integral over ``traj``."""
    q_max = params.q_max
    if not 0.0 < q < q_max:
        raise InvalidParameters(f"q must lie in (0, {q_max:g}), got {q!r}")
    m = params.m
    p_of = _extended_p(traj)

    def integrand(s):
        F = 1.0 - ((m - 1.0) * s / m) ** (1.0 / (m - 1.0))
        return (m - 1.0) * F / p_of(s) ** 2

    val, _ = integrate.quad(integrand, q, 1.0, limit=500, epsabs=1e-13, epsrel=1e-12)
    return q ** (1.0 / (m - 1.0)) * math.exp(val / (m - 1.0))


def _smooth_factor(traj: PhaseTrajectory):
    """``H`` with ``Psi(q) = H(q) q^beta (q_max - q)^kappa``; returns (H, beta, kappa)."""
    params, c = traj.params, traj.speed
    m, q_max = params.m, params.q_max
    beta = 1.0 / (m - 1.0)
    kappa = 1.0 / (m * gamma(params, c) ** 2)
    I_spl = traj.I_spline()
    I_one = float(I_spl(1.0))
    q_lo, q_hi = traj.q_lo, traj.q_hi
    I_lo, dI_lo = float(traj.I[0]), float(I_spl.derivative()(q_lo))

    def H(q):
        if q <= q_lo:
            I = I_lo + dI_lo * (q - q_lo)
        elif q >= q_hi:
            q = q_hi
            I = float(traj.I[-1])
        else:
            I = float(I_spl(q))
        return math.exp((I_one - I) / (m - 1.0)) * (q_max - q) ** (-kappa)

    return H, beta, kappa


def c_prime(
    params: ModelParams, tol: float = 1e-11, opts: IntegratorOptions | None = None
) -> Sensitivity:
    """``c'(alpha)`` from the Psi-weighted quadrature on the minimal trajectory."""
    speed = solve_min_speed(params, tol=tol, opts=opts)
    traj = speed.trajectory
    m, q_max = params.m, params.q_max
    H, beta, kappa = _smooth_factor(traj)
    quad_kw = dict(weight="alg", limit=2000, epsabs=0.0, epsrel=1e-11)
    with warnings.catch_warnings():
        # round-off limits the last digits; the error estimate is reported instead
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        J1, e1 = integrate.quad(H, 0.0, q_max, wvar=(beta, kappa), **quad_kw)
        J2, e2 = integrate.quad(H, 0.0, q_max, wvar=(beta - 1.0, kappa), **quad_kw)
    cp = -(m - 1.0) * J1 / J2
    err = abs(cp) * (e1 / J1 + e2 / J2)
    qs = traj.q
    psi = np.array([H(q) for q in qs]) * qs**beta * (q_max - qs) ** kappa
    return Sensitivity(params, speed.c, cp, list(zip(qs.tolist(), psi.tolist())), err)


def cstar(m: float, tol: float = 1e-11, opts: IntegratorOptions | None = None) -> float:
    """Coefficient of the logarithmic front lag, ``-c'(0) / c(0)``."""
    sens = c_prime(ModelParams(m, 0.0), tol=tol, opts=opts)
    return -sens.c_prime / sens.c
