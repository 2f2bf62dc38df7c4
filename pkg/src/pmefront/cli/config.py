"""Flat ``key = value`` run configuration with documented defaults."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InvalidParameters
from ..pmesim import InitialData, SimConfig


@dataclass(frozen=True)
class Key:
    default: str
    kind: str
    doc: str


KEYS = {
    "m": Key("2", "float", "porous-medium exponent, > 1"),
    "dim": Key("1", "int", "space dimension N"),
    "dr": Key("0.05", "float", "radial grid spacing"),
    "cfl_safety": Key("0.9", "float", "fraction of the positivity-preserving step, in (0, 1)"),
    "t_end": Key("200", "float", "final time"),
    "r_max": Key("0", "float", "domain radius; extended to clear c_* t_end + 10 when too small"),
    "u0_radius": Key("1", "float", "plateau initial data: radius"),
    "u0_height": Key("1", "float", "plateau initial data: height"),
    "u0_table": Key("", "path", "optional CSV with header r,u; overrides the plateau"),
    "snapshot_times": Key("", "floats", "comma-separated snapshot times"),
    "u_tol": Key("1e-10", "float", "density threshold for the support edge"),
    "record_dt": Key("0.1", "float", "interface sampling interval"),
    "hdot_window": Key("1", "float", "centred-difference window for hdot"),
    "warmup": Key("10", "float", "diagnostics start time"),
    "front_band": Key("0.025,0.25", "floats", "pressure band (fractions of q_max) for the front fit"),
    "wave_tol": Key("1e-10", "float", "bisection tolerance for the minimal speed"),
    "out_dir": Key("out", "path", "output directory"),
}


def _convert(key, raw):
    kind = KEYS[key].kind
    raw = raw.strip()
    try:
        if kind == "float":
            return float(raw)
        if kind == "int":
            v = float(raw)
            if v != int(v):
                raise ValueError(raw)
            return int(v)
        if kind == "floats":
            return tuple(float(x) for x in raw.split(",") if x.strip())
        return raw
    except ValueError:
        raise InvalidParameters(f"{key}: cannot parse {raw!r} as {kind}") from None


def parse_text(text: str, source: str = "<config>") -> dict:
    """Parse config text into a dict of every key (defaults filled in)."""
    given = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameters(f"{source}:{lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise InvalidParameters(f"{source}:{lineno}: unknown key {key!r}")
        if key in given:
            raise InvalidParameters(f"{source}:{lineno}: duplicate key {key!r}")
        given[key] = raw
    return {k: _convert(k, given.get(k, entry.default)) for k, entry in KEYS.items()}


def load(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidParameters(f"cannot read config {path}: {exc}") from None
    return parse_text(text, str(path))


def _fmt(value) -> str:
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump(values: dict) -> str:
    lines = ["# effective configuration"]
    for key, entry in KEYS.items():
        lines.append(f"# {entry.doc}")
        lines.append(f"{key} = {_fmt(values[key])}")
    return "\n".join(lines) + "\n"


def sim_config(values: dict, base_dir=None) -> SimConfig:
    if values["u0_table"]:
        path = Path(values["u0_table"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        try:
            data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        except (OSError, ValueError) as exc:
            raise InvalidParameters(f"cannot read initial data {path}: {exc}") from None
        u0 = InitialData(r_table=tuple(data[:, 0]), u_table=tuple(data[:, 1]))
    else:
        u0 = InitialData(radius=values["u0_radius"], height=values["u0_height"])
    band = values["front_band"]
    if len(band) != 2:
        raise InvalidParameters("front_band needs two values")
    return SimConfig(
        m=values["m"],
        dim=values["dim"],
        dr=values["dr"],
        cfl_safety=values["cfl_safety"],
        t_end=values["t_end"],
        r_max=values["r_max"],
        u0=u0,
        snapshot_times=values["snapshot_times"],
        u_tol=values["u_tol"],
        record_dt=values["record_dt"],
        hdot_window=values["hdot_window"],
        warmup=values["warmup"],
        front_band=band,
    )
