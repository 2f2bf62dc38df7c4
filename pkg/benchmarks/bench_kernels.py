"""Numba vs numpy timings for the two hot loops.

    python3 benchmarks/bench_kernels.py [--repeat 3]

1. PDE stencil: advance a radial m=2 front by a fixed time span.
2. Phase-plane shooting: one DOPRI5 trajectory at the m=2 minimal speed.

Compilation is excluded (one warm-up call each).  The numpy side of the
stencil is the vectorised fallback; the phase kernel has no vectorised
form, so its fallback is the same loop run by the interpreter.
"""

import argparse
import time

import numpy as np

from pmefront.pmesim import kernels
from pmefront.pmesim.sim import InitialData, SimConfig, init_state
from pmefront.wavekit import IntegratorOptions, ModelParams, integrate_trajectory
from pmefront.wavekit import phase


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_stencil(repeat, span=2.0):
    cfg = SimConfig(m=2.0, dim=2, dr=0.05, t_end=span, r_max=60.0, u0=InitialData(radius=20.0))
    base = init_state(cfg).u
    a, b = kernels.face_weights(base.size, cfg.dim)

    def go(use_numba):
        u = base.copy()
        t, steps, _, code = kernels.advance(
            u, 0.0, span, cfg.dr, cfg.m, cfg.dim, cfg.cfl_safety, 1.0 + 1e-12, 10**9, a, b,
            use_numba=use_numba,
        )
        assert code == kernels.OK
        return u, steps

    go(True)
    t_nb, (u_nb, steps) = best_of(lambda: go(True), repeat)
    t_np, (u_np, _) = best_of(lambda: go(False), repeat)
    diff = float(np.max(np.abs(u_nb - u_np)))
    return t_nb, t_np, f"{steps} steps x {int(np.count_nonzero(u_nb))} nodes, max |diff| {diff:.1e}"


def bench_phase(repeat):
    P = ModelParams(2.0, 0.0)
    opts = IntegratorOptions()
    integrate_trajectory(P, 1.0, opts)
    t_nb, tr = best_of(lambda: integrate_trajectory(P, 1.0, opts), repeat)
    jitted = phase._integrate_kernel
    pure = getattr(jitted, "py_func", jitted)
    phase._integrate_kernel = pure
    try:
        t_py, tr_py = best_of(lambda: integrate_trajectory(P, 1.0, opts), max(1, repeat // 2))
    finally:
        phase._integrate_kernel = jitted
    diff = float(np.max(np.abs(tr.p - tr_py.p)))
    return t_nb, t_py, f"{tr.q.size} samples, max |diff| {diff:.1e}"


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'kernel':<10} {'numba [s]':>10} {'fallback [s]':>13} {'speedup':>8}  notes")
    for name, fn in (("stencil", bench_stencil), ("phase", bench_phase)):
        t_nb, t_fb, note = fn(args.repeat)
        print(f"{name:<10} {t_nb:>10.4f} {t_fb:>13.4f} {t_fb / t_nb:>8.1f}  {note}")


if __name__ == "__main__":
    main()
