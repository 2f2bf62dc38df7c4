"""Sharp wavefront profiles rebuilt from phase-plane trajectories.

The profile coordinate is ``x(q) = int_0^q ds / p(s)``, accumulated by the
integrator alongside ``p``.  Past the last trajectory sample the pressure
follows the saddle asymptote ``q_max - phi ~ d e^{gamma (x - x_hi)}``.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from ..errors import InvalidParameters, TailNotConverged
from .params import ModelParams, pressure_to_density, reaction
from .phase import IntegratorOptions, PhaseTrajectory, Termination, gamma, phase_rhs
from .speed import solve_min_speed


@dataclass
class WaveProfile:
    """Front ``(x, phi(x), Phi(x))`` on ``x <= 0`` with ``phi(0) = 0``."""

    params: ModelParams
    speed: float
    x: np.ndarray
    phi: np.ndarray
    Phi: np.ndarray
    dphi: np.ndarray = field(repr=False)
    tail_rate: float = field(repr=False)
    trajectory: PhaseTrajectory = field(repr=False)

    def __post_init__(self):
        self._spline = CubicHermiteSpline(self.x, self.phi, self.dphi)

    @property
    def samples(self):
        return list(zip(self.x.tolist(), self.phi.tolist(), self.Phi.tolist()))

    @property
    def x_min(self) -> float:
        return float(self.x[0])

    def phi_at(self, x):
        """Pressure at arbitrary ``x``; zero ahead of the front."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        q_max = self.params.q_max
        inside = (x <= 0.0) & (x >= self.x[0])
        out[inside] = self._spline(x[inside])
        far = x < self.x[0]
        d0 = q_max - self.phi[0]
        out[far] = q_max - d0 * np.exp(self.tail_rate * (x[far] - self.x[0]))
        return out

    def density_at(self, x):
        return pressure_to_density(self.params, self.phi_at(x))

    def slope_at_front(self) -> float:
        """One-sided ``phi'(0^-)`` by a three-point difference of sample values."""
        x1, x2 = self.x[-2], self.x[-3]
        f1, f2 = self.phi[-2], self.phi[-3]
        # derivative at 0 of the parabola through (0, 0), (x1, f1), (x2, f2)
        return float((f1 * x2 / x1 - f2 * x1 / x2) / (x2 - x1))


def reconstruct_profile(traj: PhaseTrajectory, tail_tol: float = 1e-8, n_tail: int = 60) -> WaveProfile:
    """Invert ``p = d phi / dx`` along a saddle-connecting trajectory."""
    if traj.termination is not Termination.REACHED_CEILING:
        raise InvalidParameters(
            f"profile needs a trajectory that reaches the saddle, got {traj.termination.value}"
        )
    if np.any(traj.p >= 0.0):
        raise InvalidParameters("trajectory has non-negative interior p; front is not monotone")
    params, c = traj.params, traj.speed
    q_max = params.q_max
    g = gamma(params, c)
    # front point, trajectory nodes, then the saddle tail
    x = np.concatenate([[0.0], traj.x])
    phi = np.concatenate([[0.0], traj.q])
    dphi = np.concatenate([[-c], traj.p])
    d_hi = q_max - traj.q_hi
    # the last sample's own slope fixes the tail rate, so phi' stays continuous
    rate = -traj.p[-1] / d_hi
    d_end = tail_tol * q_max
    if d_end < d_hi:
        d = np.geomspace(d_hi, d_end, n_tail + 1)[1:]
        x_tail = traj.x[-1] + np.log(d / d_hi) / rate
        x = np.concatenate([x, x_tail])
        phi = np.concatenate([phi, q_max - d])
        dphi = np.concatenate([dphi, -rate * d])
    order = np.argsort(x, kind="stable")
    x, phi, dphi = x[order], phi[order], dphi[order]
    if np.any(np.diff(x) <= 0.0):
        raise InvalidParameters("profile abscissae are not strictly increasing")
    Phi = pressure_to_density(params, phi)
    if not math.isfinite(g) or rate <= 0.0:
        raise InvalidParameters("degenerate saddle rate")
    return WaveProfile(params, c, x, phi, Phi, dphi, rate, traj)


def ode_residual(profile: WaveProfile, at: str = "midpoints") -> np.ndarray:
    """Traveling-wave residual of the profile away from the sample points.

    ``phi'`` and ``phi''`` come from the Hermite interpolant of ``p(q)``
    (``phi'' = p dp/dq``), evaluated at interval midpoints, so the result
    measures reconstruction error rather than restating the ODE.
    """
    traj = profile.trajectory
    params, c = profile.params, profile.speed
    m, alpha = params.m, params.alpha
    spl = traj.p_spline()
    if at == "midpoints":
        q = 0.5 * (traj.q[1:] + traj.q[:-1])
    else:
        q = traj.q[1:-1]
    p = spl(q)
    d2 = p * spl.derivative()(q)
    return -c * p - (m - 1.0) * q * d2 - p * p - alpha * (m - 1.0) * q * p - reaction(params, q)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _gauss_nodes(a, b):
    """8-point Gauss-Legendre nodes/weights on each interval [a_i, b_i]."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return mid[:, None] + half[:, None] * _GL_X[None, :], half[:, None] * _GL_W[None, :]


@dataclass(frozen=True)
class ProfileConstant:
    value: float
    x_star: float
    tail_sensitivity: float


def _profile_ratio(profile: WaveProfile, x_lo: float):
    """Numerator/denominator integrals of the profile form on [x_lo, 0].

    Integrating by parts moves the derivative off ``Phi`` (singular at the
    front when m > 2) onto the weight:
        int (Phi^k)' W dx = (m-1)/m int Phi^k W g dx,
        g = (1 - Phi) / (Phi^{m-1})',  W = exp((m-1)/m int_x^{x*} g dy).
    """
    params = profile.params
    m = params.m
    edges = profile.x[profile.x >= x_lo]
    if edges[0] > x_lo:
        edges = np.concatenate([[x_lo], edges])
    a, b = edges[:-1], edges[1:]

    def g_of(x):
        phi = profile.phi_at(x)
        dphi = profile._spline.derivative()(x)
        Phi = pressure_to_density(params, phi)
        return (1.0 - Phi) / ((m - 1.0) / m * dphi), Phi

    x_star = brentq(lambda s: float(profile.phi_at(np.array([s]))[0]) - 1.0, profile.x_min, 0.0, xtol=1e-14)
    # cumulative int_{x_lo}^{x} g at interval edges
    xs, ws = _gauss_nodes(a, b)
    g_nodes, Phi_nodes = g_of(xs.ravel())
    g_nodes = g_nodes.reshape(xs.shape)
    Phi_nodes = Phi_nodes.reshape(xs.shape)
    cum_edges = np.concatenate([[0.0], np.cumsum((g_nodes * ws).sum(axis=1))])
    # partial integrals from each interval's left edge to each Gauss node
    sub_x, sub_w = _gauss_nodes(np.repeat(a, 8), xs.ravel())
    sub_g, _ = g_of(sub_x.ravel())
    partial = (sub_g.reshape(sub_x.shape) * sub_w).sum(axis=1).reshape(xs.shape)
    G_lo_to_x = cum_edges[:-1, None] + partial
    # int_{x_lo}^{x*} g, by one more Gauss rule on the interval holding x*
    k = int(np.searchsorted(edges, x_star) - 1)
    sx, sw = _gauss_nodes(np.array([edges[k]]), np.array([x_star]))
    G_star = cum_edges[k] + float((g_of(sx.ravel())[0] * sw.ravel()).sum())
    W = np.exp((m - 1.0) / m * (G_star - G_lo_to_x))
    num = float((Phi_nodes**m * W * g_nodes * ws).sum())
    den = float((Phi_nodes * W * g_nodes * ws).sum())
    return num / den, x_star


def cstar_profile_details(
    m: float, tail_tol: float = 1e-8, check_tol: float = 1e-4, opts: IntegratorOptions | None = None
) -> ProfileConstant:
    params = ModelParams(m, 0.0)
    speed = solve_min_speed(params, tol=1e-11, opts=opts)
    profile = reconstruct_profile(speed.trajectory, tail_tol=tail_tol)
    q_max = params.q_max
    ratio, x_star = _profile_ratio(profile, profile.x_min)
    # the same ratio with the tail cut where phi first exceeds q_max (1 - sqrt(tail_tol))
    x_short = float(profile.x[np.nonzero(profile.phi >= q_max * (1.0 - math.sqrt(tail_tol)))[0][-1]])
    ratio_short, _ = _profile_ratio(profile, x_short)
    value = ratio / speed.c
    sensitivity = abs(ratio_short - ratio) / speed.c
    if sensitivity > check_tol:
        raise TailNotConverged(
            f"profile-form constant moves by {sensitivity:.3g} when the tail is shortened"
        )
    return ProfileConstant(value, x_star, sensitivity)


def cstar_profile_form(m: float, tail_tol: float = 1e-8, check_tol: float = 1e-4) -> float:
    """Log-shift constant from the alpha = 0 density profile integrals."""
    return cstar_profile_details(m, tail_tol, check_tol).value


def wave_profile(params: ModelParams, tol: float = 1e-11, opts: IntegratorOptions | None = None) -> WaveProfile:
    """Minimal-speed profile for ``params``."""
    return reconstruct_profile(solve_min_speed(params, tol=tol, opts=opts).trajectory)


def dphi_dalpha_sup(
    params: ModelParams, h: float = 1e-3, x_range=(-30.0, 0.0), n: int = 3001
) -> float:
    """Sup over sampled ``x <= 0`` of the centred alpha-difference of ``phi``."""
    if not h > 0.0:
        raise InvalidParameters("h must be positive")
    lo, hi = x_range
    if hi > 0.0 or lo >= hi:
        raise InvalidParameters("x_range must be an interval inside x <= 0")
    xs = np.linspace(lo, hi, n)
    up = wave_profile(params.with_alpha(params.alpha + h)).phi_at(xs)
    dn = wave_profile(params.with_alpha(params.alpha - h)).phi_at(xs)
    return float(np.max(np.abs(up - dn)) / (2.0 * h))
