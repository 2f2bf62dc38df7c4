"""``pmefront`` command line: wave, simulate, fit, verify.

Exit codes: 0 ok, 1 verification failure, 2 usage or invalid input,
3 numerical failure.
"""

import argparse
import datetime
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from .. import __version__
from .._accel import USE_NUMBA
from ..errors import InvalidParameters, NumericalFailure, PmeFrontError
from . import config as runconfig

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("pmefront")


def _json(obj) -> str:
    def default(o):
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(type(o).__name__)

    def clean(o):
        if isinstance(o, float) and not math.isfinite(o):
            return None
        if isinstance(o, dict):
            return {str(k): clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return o

    return json.dumps(clean(obj), indent=2, sort_keys=True, default=default)


def _parse_pair(text: str):
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise InvalidParameters(f"expected two comma-separated numbers, got {text!r}") from None
    return a, b


def cmd_wave(args) -> int:
    from .. import wavekit

    params = wavekit.ModelParams(args.m, args.alpha)
    speed = wavekit.solve_min_speed(params, tol=args.tol)
    sens = wavekit.c_prime(params)
    profile = wavekit.reconstruct_profile(speed.trajectory)
    cs = wavekit.cstar(args.m) if args.alpha != 0.0 else -sens.c_prime / sens.c
    report = {
        "m": args.m,
        "alpha": args.alpha,
        "c": speed.c,
        "c_prime": sens.c_prime,
        "cstar": cs,
        "gamma": wavekit.gamma(params, speed.c),
        "residuals": {
            "speed_seed": speed.residual,
            "bracket_width": speed.bracket[1] - speed.bracket[0],
            "profile_ode_max": float(np.max(np.abs(wavekit.ode_residual(profile)))),
            "front_slope_plus_c": profile.slope_at_front() + speed.c,
            "c_prime_quadrature": sens.quadrature_error,
        },
    }
    text = _json(report)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "wave.json").write_text(text + "\n")
        with open(out / "profile.csv", "w") as fh:
            fh.write("x,phi,Phi\n")
            for x, phi, Phi in zip(profile.x, profile.phi, profile.Phi):
                fh.write(f"{x:.17g},{phi:.17g},{Phi:.17g}\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    from .. import pmesim, wavekit

    values = runconfig.load(args.config)
    if args.out:
        values["out_dir"] = args.out
    cfg = runconfig.sim_config(values, base_dir=Path(args.config).parent)
    c_star = wavekit.solve_min_speed(wavekit.ModelParams(cfg.m, 0.0), tol=values["wave_tol"]).c
    cfg, extended = cfg.with_domain(c_star)
    if extended:
        print(f"note: r_max extended to {cfg.r_max:g} to clear the front at t_end", file=sys.stderr)
        values["r_max"] = cfg.r_max
    out = Path(values["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(runconfig.dump(values))
    started = datetime.datetime.now(datetime.timezone.utc)
    t0 = time.perf_counter()
    res = pmesim.run(cfg, c_star=c_star)
    wall = time.perf_counter() - t0
    pmesim.write_series(res.series, out / "series.csv")
    for snap in res.snapshots.values():
        pmesim.write_snapshot(snap, out)
    s = res.series
    summary = {
        "t_end": float(s.t[-1]),
        "h_end": float(s.h[-1]),
        "h_over_t": float(s.h[-1] / s.t[-1]),
        "c_star": c_star,
        "steps": res.steps,
        "r_max": cfg.r_max,
        "rows": len(s),
        "snapshots": sorted(res.snapshots),
    }
    (out / "summary.json").write_text(_json(summary) + "\n")
    meta = {
        "started_utc": started.isoformat(),
        "wall_seconds": wall,
        "version": __version__,
        "numba": USE_NUMBA,
        "config": str(args.config),
    }
    (out / "metadata.json").write_text(_json(meta) + "\n")
    print(_json(summary))
    return EXIT_OK


def cmd_fit(args) -> int:
    from .. import pmesim, shiftfit

    series = pmesim.read_series(args.series)
    window = _parse_pair(args.window) if args.window else None
    if args.pinned_c is not None:
        fit = shiftfit.fit_shift_pinned(series, args.pinned_c, window)
    else:
        fit = shiftfit.fit_shift(series, window)
    text = _json(fit.report(args.predicted_B))
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .. import verify

    numbers = []
    if args.quick or not args.full:
        numbers += list(verify.QUICK)
    if args.full:
        numbers += list(verify.FULL)
    results = verify.run_tier(numbers, jobs=args.jobs)
    for r in results:
        print(verify.format_line(r))
        if r.detail:
            print(f"      {r.detail}")
    summary = {
        "passed": all(r.passed for r in results),
        "criteria": [r.as_dict() for r in results],
    }
    text = _json(summary)
    print(text)
    if args.json:
        Path(args.json).write_text(text + "\n")
    return EXIT_OK if summary["passed"] else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pmefront", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("wave", help="minimal speed, sensitivity and sharp profile")
    w.add_argument("--m", type=float, required=True)
    w.add_argument("--alpha", type=float, default=0.0)
    w.add_argument("--tol", type=float, default=1e-10)
    w.add_argument("--out", help="directory for wave.json and profile.csv")
    w.set_defaults(func=cmd_wave)

    s = sub.add_parser("simulate", help="run the radial free-boundary simulation")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="override out_dir")
    s.set_defaults(func=cmd_simulate)

    f = sub.add_parser("fit", help="fit h(t) = c t - B log t + r0")
    f.add_argument("--series", required=True)
    f.add_argument("--window", help="t_lo,t_hi (default: last three quarters)")
    f.add_argument("--predicted-B", dest="predicted_B", type=float)
    f.add_argument("--pinned-c", dest="pinned_c", type=float, help="hold the linear speed fixed")
    f.add_argument("--out", help="write the JSON report here too")
    f.set_defaults(func=cmd_fit)

    v = sub.add_parser("verify", help="run the acceptance criteria")
    v.add_argument("--quick", action="store_true", help="criteria 1-5 (default)")
    v.add_argument("--full", action="store_true", help="criteria 6-10 (simulations)")
    v.add_argument("--jobs", type=int, default=3, help="parallel reference runs")
    v.add_argument("--json", help="write the JSON summary here too")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except InvalidParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PmeFrontError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
