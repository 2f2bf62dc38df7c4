from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np

from ..errors import CFLViolation, EmptySupport, InvalidParameters, NumericalFailure
from . import kernels

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class InitialData:
    """Plateau ``u0 = height`` on ``r <= radius``, or tabulated ``(r, u)`` values."""

    radius: float = 1.0
    height: float = 1.0
    r_table: tuple = ()
    u_table: tuple = ()

    @property
    def tabulated(self) -> bool:
        return len(self.r_table) > 0

    def support_radius(self) -> float:
        if self.tabulated:
            r = np.asarray(self.r_table, dtype=float)
            u = np.asarray(self.u_table, dtype=float)
            pos = np.nonzero(u > 0.0)[0]
            return float(r[pos[-1]]) if pos.size else 0.0
        return self.radius

    def sample(self, r: np.ndarray) -> np.ndarray:
        if self.tabulated:
            rt = np.asarray(self.r_table, dtype=float)
            ut = np.asarray(self.u_table, dtype=float)
            if rt.shape != ut.shape or rt.ndim != 1:
                raise InvalidParameters("tabulated initial data needs matching r and u columns")
            if not np.all(np.isfinite(ut)):
                raise InvalidParameters("initial data must be bounded")
            if np.any(ut < 0.0):
                raise InvalidParameters("initial data must be nonnegative")
            if np.any(np.diff(rt) <= 0.0):
                raise InvalidParameters("tabulated radii must be increasing")
            return np.interp(r, rt, ut, left=ut[0], right=0.0)
        if not (math.isfinite(self.height) and math.isfinite(self.radius)):
            raise InvalidParameters("initial data must be bounded")
        if self.height < 0.0:
            raise InvalidParameters("initial data must be nonnegative")
        return np.where(r <= self.radius + 1e-12, self.height, 0.0)


@dataclass(frozen=True)
class SimConfig:
    m: float = 2.0
    dim: int = 1
    dr: float = 0.05
    cfl_safety: float = 0.9
    t_end: float = 200.0
    r_max: float = 0.0
    u0: InitialData = field(default_factory=InitialData)
    snapshot_times: tuple = ()
    u_tol: float = 1e-10
    record_dt: float = 0.1
    hdot_window: float = 1.0
    warmup: float = 10.0
    front_band: tuple = (0.025, 0.25)
    max_steps: int = 50_000_000

    def __post_init__(self):
        if not self.m > 1.0:
            raise InvalidParameters(f"m must exceed 1, got {self.m}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise InvalidParameters(f"dimension must be a positive integer, got {self.dim}")
        if not self.dr > 0.0:
            raise InvalidParameters("dr must be positive")
        if not 0.0 < self.cfl_safety < 1.0:
            raise InvalidParameters("cfl_safety must lie in (0, 1)")
        if not self.t_end > 0.0:
            raise InvalidParameters("t_end must be positive")
        if not self.record_dt > 0.0:
            raise InvalidParameters("record_dt must be positive")
        lo, hi = self.front_band
        if not 0.0 < lo < hi < 1.0:
            raise InvalidParameters("front_band must satisfy 0 < lo < hi < 1")

    @property
    def q_max(self) -> float:
        return self.m / (self.m - 1.0)

    def required_r_max(self, c_star: float) -> float:
        return self.u0.support_radius() + c_star * self.t_end + 10.0

    def with_domain(self, c_star: float):
        """Config whose domain clears the expected front; returns (config, extended?)."""
        need = self.required_r_max(c_star)
        if self.r_max >= need:
            return self, False
        return replace(self, r_max=float(math.ceil(need))), True


@dataclass
class SimState:
    t: float
    u: np.ndarray
    dr: float
    m: float
    dim: int

    @property
    def r(self) -> np.ndarray:
        return np.arange(self.u.size) * self.dr

    @property
    def v(self) -> np.ndarray:
        m = self.m
        return m / (m - 1.0) * self.u ** (m - 1.0)

    def copy(self) -> "SimState":
        return SimState(self.t, self.u.copy(), self.dr, self.m, self.dim)


def init_state(config: SimConfig) -> SimState:
    if not config.r_max > 0.0:
        raise InvalidParameters("r_max must be set (see SimConfig.with_domain)")
    n = int(round(config.r_max / config.dr)) + 1
    r = np.arange(n) * config.dr
    u = config.u0.sample(r).astype(float)
    u[-1] = 0.0
    if not np.any(u > 0.0):
        raise InvalidParameters("initial data vanish identically")
    if np.nonzero(u > 0.0)[0][-1] >= n - 3:
        raise InvalidParameters("initial support touches the domain edge")
    return SimState(0.0, u, config.dr, config.m, config.dim)


def _u_cap(u0_max: float) -> float:
    return max(1.0, u0_max) + 1e-12


def step(state: SimState, config: SimConfig, u_cap: float | None = None) -> SimState:
    """One explicit step at the stable ``dt``; returns a new state."""
    u = state.u
    cap = _u_cap(float(u.max())) if u_cap is None else u_cap
    a, b = kernels.face_weights(u.size, config.dim)
    dt = kernels.stable_dt(float(u.max()), config.dr, config.m, config.dim, config.cfl_safety)
    new = kernels.step_numpy(u, dt, config.dr, config.m, config.dim, a, b)
    low = float(new.min())
    if low < -1e-12:
        log.info("clamped negative round-off %.3g", low)
    np.maximum(new, 0.0, out=new)
    if new.max() > cap:
        raise CFLViolation(f"max(u) = {new.max():.17g} exceeds the bound {cap:.17g}")
    return SimState(state.t + dt, new, state.dr, state.m, state.dim)


def locate_front(state: SimState, u_tol: float = 1e-10) -> float:
    """Node-pair pressure extrapolation past the last node with ``u > u_tol``.

    ``h = r_j + v_j dr / (v_j - v_{j+1})`` with the increment clamped to
    ``[0, dr]``; falls back to ``r_j`` when the pressure does not decrease.
    """
    u = state.u
    pos = np.nonzero(u > u_tol)[0]
    if pos.size == 0:
        raise EmptySupport("no grid value above the front threshold")
    j = int(pos[-1])
    v = state.v
    r_j = j * state.dr
    if j + 1 >= u.size:
        return r_j
    drop = v[j] - v[j + 1]
    if drop <= 0.0:
        return r_j
    return r_j + min(max(v[j] * state.dr / drop, 0.0), state.dr)


def fit_front(state: SimState, band=(0.025, 0.25), u_tol: float = 1e-10):
    """Free boundary from a quadratic fit of the pressure near the front.

    Uses the trailing nodes whose pressure lies in ``band * q_max``; these sit
    on the smooth part of the ramp, behind the few nodes of super-exponential
    numerical precursor.  Returns ``(h, v_r(h^-))``; falls back to
    :func:`locate_front` (slope NaN) when fewer than three nodes qualify.
    """
    u = state.u
    pos = np.nonzero(u > u_tol)[0]
    if pos.size == 0:
        raise EmptySupport("no grid value above the front threshold")
    j = int(pos[-1])
    v = state.v
    q_max = state.m / (state.m - 1.0)
    lo, hi = band[0] * q_max, band[1] * q_max
    k = j
    while k >= 0 and v[k] < lo:
        k -= 1
    top = k
    while k >= 0 and lo <= v[k] <= hi:
        k -= 1
    idx = np.arange(k + 1, top + 1)
    if idx.size < 3:
        return locate_front(state, u_tol), math.nan
    r = idx * state.dr
    r_ref = r[-1]
    coef = np.polyfit(r - r_ref, v[idx], 2)
    a2, a1, a0 = coef
    # root beyond the last node, by Newton from the linear extrapolation
    s = -a0 / a1 if a1 < 0.0 else 0.0
    for _ in range(20):
        val = (a2 * s + a1) * s + a0
        der = 2.0 * a2 * s + a1
        if der >= 0.0:
            break
        ds = val / der
        s -= ds
        if abs(ds) < 1e-15:
            break
    slope = 2.0 * a2 * s + a1
    if not (math.isfinite(s) and slope < 0.0 and -state.dr <= s <= 5.0 * state.dr):
        return locate_front(state, u_tol), math.nan
    return r_ref + s, slope


def max_flux(state: SimState) -> float:
    """``max_r |(u^m)_r|`` by centred differences."""
    w = state.u**state.m
    return float(np.max(np.abs(w[2:] - w[:-2])) / (2.0 * state.dr))


@dataclass
class InterfaceSeries:
    t: np.ndarray
    h: np.ndarray
    hdot: np.ndarray
    front_flux: np.ndarray
    max_flux: np.ndarray

    COLUMNS = ("t", "h", "hdot", "front_flux", "max_flux")

    @property
    def rows(self):
        return list(zip(*(getattr(self, c).tolist() for c in self.COLUMNS)))

    def __len__(self):
        return int(self.t.size)

    def window(self, t_lo: float, t_hi: float) -> "InterfaceSeries":
        sel = (self.t >= t_lo) & (self.t <= t_hi)
        return InterfaceSeries(*(getattr(self, c)[sel] for c in self.COLUMNS))


def smoothed_rate(t: np.ndarray, h: np.ndarray, window: float) -> np.ndarray:
    """Centred difference ``(h(t + w/2) - h(t - w/2)) / w``, one-sided at the ends."""
    lo = np.clip(t - 0.5 * window, t[0], t[-1])
    hi = np.clip(t + 0.5 * window, t[0], t[-1])
    span = hi - lo
    out = np.full_like(t, np.nan)
    ok = span > 0.0
    out[ok] = (np.interp(hi[ok], t, h) - np.interp(lo[ok], t, h)) / span[ok]
    return out


@dataclass
class RunResult:
    config: SimConfig
    series: InterfaceSeries
    snapshots: dict
    final: SimState
    steps: int
    notes: list


def _record_times(config: SimConfig) -> np.ndarray:
    n = int(math.floor(config.t_end / config.record_dt + 1e-9))
    grid = np.arange(1, n + 1) * config.record_dt
    extra = [t for t in config.snapshot_times if 0.0 < t <= config.t_end]
    times = np.union1d(np.round(grid, 12), np.asarray(extra, dtype=float))
    if times.size == 0 or times[-1] < config.t_end:
        times = np.append(times, config.t_end)
    return times


def run(config: SimConfig, c_star: float | None = None, use_numba=None) -> RunResult:
    """Evolve to ``t_end``, recording the interface and requested snapshots.

    ``c_star`` sizes the domain; when omitted it is computed by wavekit.
    """
    notes = []
    if c_star is None:
        from ..wavekit import ModelParams, solve_min_speed

        c_star = solve_min_speed(ModelParams(config.m, 0.0), tol=1e-9).c
    config, extended = config.with_domain(c_star)
    if extended:
        msg = f"r_max extended to {config.r_max:g} to clear the front at t_end"
        log.warning(msg)
        notes.append(msg)
    state = init_state(config)
    u = state.u
    cap = _u_cap(float(u.max()))
    a, b = kernels.face_weights(u.size, config.dim)
    snaps_wanted = {float(t) for t in config.snapshot_times if 0.0 <= t <= config.t_end}
    snapshots = {}
    if 0.0 in snaps_wanted:
        snapshots[0.0] = state.copy()
    rows = []
    t = 0.0
    total = 0
    for target in _record_times(config):
        t, steps, neg, code = kernels.advance(
            u, t, target, config.dr, config.m, config.dim, config.cfl_safety, cap,
            config.max_steps - total, a, b, use_numba=use_numba,
        )
        total += steps
        if neg < -1e-12:
            log.info("clamped negative round-off %.3g before t=%g", neg, t)
        if code == kernels.OVERSHOOT:
            raise CFLViolation(f"u exceeded its a-priori bound near t={t:g}")
        if code == kernels.HIT_BOUNDARY:
            raise NumericalFailure(f"support reached r_max={config.r_max:g} at t={t:g}")
        if code == kernels.STEP_LIMIT:
            raise NumericalFailure(f"step budget exhausted at t={t:g}")
        cur = SimState(t, u, config.dr, config.m, config.dim)
        h, slope = fit_front(cur, config.front_band, config.u_tol)
        rows.append((t, h, slope, max_flux(cur)))
        for ts in snaps_wanted:
            if abs(ts - t) <= 1e-9 and ts not in snapshots:
                snapshots[ts] = cur.copy()
    arr = np.array(rows)
    tt, hh = arr[:, 0], arr[:, 1]
    series = InterfaceSeries(
        t=tt, h=hh, hdot=smoothed_rate(tt, hh, config.hdot_window),
        front_flux=arr[:, 2], max_flux=arr[:, 3],
    )
    final = SimState(t, u, config.dr, config.m, config.dim)
    return RunResult(config, series, snapshots, final, total, notes)


def ab_bound(m: float, t: float) -> float:
    """Lower bound ``W(t) = -k e^{-(m-1)kt} / (1 - e^{-(m-1)kt})``, ``k = min(1, 1/(m-1))``."""
    k = min(1.0, 1.0 / (m - 1.0))
    e = math.exp(-(m - 1.0) * k * t)
    return -k * e / (1.0 - e)


@dataclass(frozen=True)
class ABReport:
    t: float
    bound: float
    min_excess: float
    r_at_min: float
    points: int


def ab_check(state: SimState, t: float | None = None, u_tol: float = 1e-10) -> ABReport:
    """Minimum of ``Lap(v) + F(v) - W(t)`` over interior nodes with ``u > u_tol``.

    ``F(v) = 1 - ((m-1) v / m)^(1/(m-1))`` is the per-unit-pressure reaction,
    the quantity that enters ``v_t = (m-1) v (Lap v + F(v)) + |v_r|^2``.
    (With the full reaction ``(m-1) v F(v)`` in its place the bound fails on
    the exact m = 2 front, where it equals -1/2 at the free boundary.)
    ``Lap`` is the radial Laplacian (``2N v''`` at the origin).  The last
    positive node is excluded: the pressure is not smooth across the front.
    """
    t = state.t if t is None else t
    if not t > 0.0:
        raise InvalidParameters("the estimate needs t > 0")
    m, N, dr = state.m, state.dim, state.dr
    v = state.v
    n = v.size
    lap = np.empty(n)
    lap[0] = 2.0 * N * (v[1] - v[0]) / dr**2
    i = np.arange(1, n - 1)
    lap[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / dr**2 + (N - 1.0) / (i * dr) * (v[2:] - v[:-2]) / (
        2.0 * dr
    )
    lap[-1] = np.nan
    F = 1.0 - np.clip((m - 1.0) * v / m, 0.0, None) ** (1.0 / (m - 1.0))
    pos = np.nonzero(state.u > u_tol)[0]
    W = ab_bound(m, t)
    if pos.size < 2:
        return ABReport(t, W, math.inf, math.nan, 0)
    idx = pos[pos < pos[-1]]
    excess = lap[idx] + F[idx] - W
    k = int(np.argmin(excess))
    return ABReport(t, W, float(excess[k]), float(idx[k] * dr), int(idx.size))
