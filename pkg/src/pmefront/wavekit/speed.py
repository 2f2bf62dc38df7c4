from dataclasses import dataclass
import functools
import logging

from ..errors import BracketNotFound, InvalidParameters, StepFailure
from .params import ModelParams
from .phase import (
    IntegratorOptions,
    PhaseTrajectory,
    Termination,
    connect_to_saddle,
    front_slope,
    integrate_trajectory,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class WaveSpeed:
    params: ModelParams
    c: float
    bracket: tuple
    residual: float
    iterations: int
    trajectory: PhaseTrajectory

    def __float__(self):
        return self.c


@functools.lru_cache(maxsize=None)
def bracket_orientation() -> int:
    """Side (+1 above / -1 below the saddle connection) taken by too-slow speeds.

    Calibrated once on the m = 2 front, whose minimal speed is exactly 1.
    """
    oracle = ModelParams(2.0, 0.0)
    slow = integrate_trajectory(oracle, 0.9).side
    fast = integrate_trajectory(oracle, 1.1).side
    if slow == fast:
        raise RuntimeError("phase-plane classifier does not separate c = 0.9 from c = 1.1 at m = 2")
    return slow


def _side(params, c, opts):
    traj = integrate_trajectory(params, c, opts)
    if traj.termination is Termination.STEP_FAILURE:
        raise StepFailure(
            f"phase integration failed at c={c:.12g} (m={params.m}, alpha={params.alpha}), "
            f"q={traj.termination_q:.6g}"
        )
    return traj.side, traj


def solve_min_speed(
    params: ModelParams,
    tol: float = 1e-10,
    opts: IntegratorOptions | None = None,
    c_guess: float | None = None,
    max_expansions: int = 60,
) -> WaveSpeed:
    """Minimal front speed ``c(alpha)`` by bisection between trajectory classes."""
    if not tol > 0.0:
        raise InvalidParameters("tol must be positive")
    opts = opts or IntegratorOptions()
    slow_side = bracket_orientation()
    guess = c_guess if c_guess is not None else max(1.0, -params.m * params.alpha + 1.0)

    lo, hi = guess / 1.5, guess * 1.5
    for _ in range(max_expansions):
        if _side(params, lo, opts)[0] == slow_side:
            break
        hi = lo
        lo *= 0.5
    else:
        raise BracketNotFound(f"no slow speed found down to c={lo:g}")
    for _ in range(max_expansions):
        if _side(params, hi, opts)[0] != slow_side:
            break
        lo = hi
        hi *= 2.0
    else:
        raise BracketNotFound(f"no fast speed found up to c={hi:g}")

    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _side(params, mid, opts)[0] == slow_side:
            lo = mid
        else:
            hi = mid
        iterations += 1
    c = 0.5 * (lo + hi)
    traj = connect_to_saddle(integrate_trajectory(params, c, opts))
    if traj.termination is Termination.STEP_FAILURE:
        raise StepFailure(f"saddle branch failed at c={c:.12g}")
    log.debug("c=%.15g, branch mismatch %.3g at q=%.4g", c, traj.match_gap, traj.match_q)
    residual = abs(traj.p[0] + c - front_slope(params, c) * traj.q[0])
    return WaveSpeed(params, c, (lo, hi), residual, iterations, traj)
