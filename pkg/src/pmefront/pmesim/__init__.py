"""Radial porous-medium Fisher-KPP simulator with free-boundary tracking."""

from .io import read_series, read_snapshot, snapshot_name, write_series, write_snapshot
from .kernels import advance, stable_dt
from .sim import (
    ABReport,
    InitialData,
    InterfaceSeries,
    RunResult,
    SimConfig,
    SimState,
    ab_bound,
    ab_check,
    fit_front,
    init_state,
    locate_front,
    max_flux,
    run,
    smoothed_rate,
    step,
)

__all__ = [
    "ABReport",
    "InitialData",
    "InterfaceSeries",
    "RunResult",
    "SimConfig",
    "SimState",
    "ab_bound",
    "ab_check",
    "advance",
    "fit_front",
    "init_state",
    "locate_front",
    "max_flux",
    "read_series",
    "read_snapshot",
    "run",
    "smoothed_rate",
    "snapshot_name",
    "stable_dt",
    "step",
    "write_series",
    "write_snapshot",
]
