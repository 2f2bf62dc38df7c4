"""CSV round-trip for snapshots and interface series (17 significant digits)."""

import csv
from pathlib import Path

import numpy as np

from ..errors import InvalidParameters
from .sim import InterfaceSeries, SimState

_FMT = "{:.17g}"


def _fmt(x: float) -> str:
    return _FMT.format(float(x))


def snapshot_name(t: float) -> str:
    return f"snap_t{t:g}.csv"


def write_snapshot(state: SimState, directory) -> Path:
    path = Path(directory) / snapshot_name(state.t)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r", "u", "v"])
        for r, u, v in zip(state.r, state.u, state.v):
            w.writerow([_fmt(r), _fmt(u), _fmt(v)])
    return path


def read_snapshot(path, m: float, dim: int, t: float | None = None) -> SimState:
    """Snapshot CSV back to a state; ``t`` defaults to the value in the file name."""
    path = Path(path)
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    r, u = data[:, 0], data[:, 1]
    if r.size < 3:
        raise InvalidParameters(f"{path}: too few rows")
    dr = float(r[1] - r[0])
    if not np.allclose(np.diff(r), dr, rtol=1e-9, atol=1e-12):
        raise InvalidParameters(f"{path}: grid is not uniform")
    if t is None:
        stem = path.stem
        if not stem.startswith("snap_t"):
            raise InvalidParameters(f"{path}: cannot infer time from the file name")
        t = float(stem[len("snap_t"):])
    return SimState(float(t), u.copy(), dr, m, dim)


def write_series(series: InterfaceSeries, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(InterfaceSeries.COLUMNS)
        for row in series.rows:
            w.writerow([_fmt(x) for x in row])
    return path


def read_series(path) -> InterfaceSeries:
    path = Path(path)
    with open(path, newline="") as fh:
        header = next(csv.reader(fh), None)
    if header is None or tuple(h.strip() for h in header) != InterfaceSeries.COLUMNS:
        raise InvalidParameters(f"{path}: expected header {','.join(InterfaceSeries.COLUMNS)}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        data = np.empty((0, 5))
    return InterfaceSeries(*(data[:, k].copy() for k in range(5)))
