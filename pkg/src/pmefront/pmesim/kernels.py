"""Explicit radial stencil for ``u_t = Lap(u^m) + u(1-u)``.

Flux form on the uniform grid ``r_i = i dr``:

    Lap(w)_i = [ a_i (w_{i+1} - w_i) - b_i (w_i - w_{i-1}) ] / dr^2,
    a_i = ((i + 1/2)/i)^(N-1),  b_i = ((i - 1/2)/i)^(N-1),
    Lap(w)_0 = 2N (w_1 - w_0) / dr^2,

with ``w = u^m`` and the outer node held at zero.  Two interchangeable
implementations: a numba loop (default) and a vectorised numpy step used
when numba is disabled.
"""

import numpy as np

from .._accel import USE_NUMBA, njit

# exit codes of advance()
OK, OVERSHOOT, STEP_LIMIT, HIT_BOUNDARY = 0, 1, 2, 3


def face_weights(n, N):
    i = np.arange(1, n - 1, dtype=float)
    a = np.empty(n)
    b = np.empty(n)
    a[0] = b[0] = 0.0
    a[-1] = b[-1] = 0.0
    a[1:-1] = ((i + 0.5) / i) ** (N - 1)
    b[1:-1] = ((i - 0.5) / i) ** (N - 1)
    return a, b


def stable_dt(umax, dr, m, N, cfl):
    """Positivity-preserving step: ``cfl / (2 N m umax^(m-1) / dr^2 + 1)``."""
    return cfl / (2.0 * N * m * umax ** (m - 1.0) / (dr * dr) + 1.0)


@njit
def _advance_loop(u, t, t_target, dr, m, N, cfl, u_cap, max_steps, a, b):
    n = u.size
    w = np.zeros(n)
    new = np.zeros(n)
    inv_dr2 = 1.0 / (dr * dr)
    # active region: every node past `edge + 1` is zero and stays zero this step
    edge = 0
    for i in range(n):
        if u[i] > 0.0:
            edge = i
    steps = 0
    most_negative = 0.0
    while t < t_target:
        if steps >= max_steps:
            return t, steps, most_negative, STEP_LIMIT
        hi = min(edge + 2, n - 1)
        if hi >= n - 1:
            return t, steps, most_negative, HIT_BOUNDARY
        umax = 0.0
        for i in range(hi):
            if u[i] > umax:
                umax = u[i]
        dt = cfl / (2.0 * N * m * umax ** (m - 1.0) * inv_dr2 + 1.0)
        final = t + dt >= t_target
        if final:
            dt = t_target - t
        for i in range(hi + 1):
            ui = u[i]
            w[i] = ui**m if ui > 0.0 else 0.0
        u0 = u[0]
        new[0] = u0 + dt * (2.0 * N * (w[1] - w[0]) * inv_dr2 + u0 * (1.0 - u0))
        for i in range(1, hi):
            ui = u[i]
            lap = (a[i] * (w[i + 1] - w[i]) - b[i] * (w[i] - w[i - 1])) * inv_dr2
            new[i] = ui + dt * (lap + ui * (1.0 - ui))
        for i in range(hi):
            v = new[i]
            if v < 0.0:
                if v < most_negative:
                    most_negative = v
                v = 0.0
            if v > u_cap:
                return t, steps, most_negative, OVERSHOOT
            u[i] = v
            if v > 0.0 and i > edge:
                edge = i
        t = t_target if final else t + dt
        steps += 1
    return t, steps, most_negative, OK


def step_numpy(u, dt, dr, m, N, a, b):
    """One explicit update (no clamping), vectorised."""
    w = np.where(u > 0.0, u, 0.0) ** m
    lap = np.zeros_like(u)
    lap[0] = 2.0 * N * (w[1] - w[0])
    lap[1:-1] = a[1:-1] * (w[2:] - w[1:-1]) - b[1:-1] * (w[1:-1] - w[:-2])
    new = u + dt * (lap / (dr * dr) + u * (1.0 - u))
    new[-1] = 0.0
    return new


def _advance_numpy(u, t, t_target, dr, m, N, cfl, u_cap, max_steps, a, b):
    n = u.size
    steps = 0
    most_negative = 0.0
    pos = np.nonzero(u > 0.0)[0]
    edge = int(pos[-1]) if pos.size else 0
    while t < t_target:
        if steps >= max_steps:
            return t, steps, most_negative, STEP_LIMIT
        hi = min(edge + 2, n - 1)
        if hi >= n - 1:
            return t, steps, most_negative, HIT_BOUNDARY
        dt = stable_dt(float(u[:hi].max()), dr, m, N, cfl)
        final = t + dt >= t_target
        if final:
            dt = t_target - t
        seg = u[: hi + 1]
        new = step_numpy(seg, dt, dr, m, N, a[: hi + 1], b[: hi + 1])[:hi]
        low = float(new.min())
        if low < most_negative:
            most_negative = low
        np.maximum(new, 0.0, out=new)
        if new.max() > u_cap:
            return t, steps, most_negative, OVERSHOOT
        u[:hi] = new
        if new[edge + 1 :].any():
            edge = int(np.nonzero(new > 0.0)[0][-1])
        t = t_target if final else t + dt
        steps += 1
    return t, steps, most_negative, OK


def advance(u, t, t_target, dr, m, N, cfl, u_cap, max_steps, a, b, use_numba=None):
    """Step ``u`` in place from ``t`` to exactly ``t_target``.

    Returns ``(t, steps, most_negative_clamped, code)``.
    """
    if use_numba is None:
        use_numba = USE_NUMBA
    fn = _advance_loop if use_numba else _advance_numpy
    t, steps, neg, code = fn(
        u, float(t), float(t_target), float(dr), float(m), float(N), float(cfl),
        float(u_cap), int(max_steps), a, b,
    )
    return float(t), int(steps), float(neg), int(code)
