"""Compare the numba and numpy kernel backends on the hot paths.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Both kernel modules are imported directly, so the result does not depend on
SLEKIT_DISABLE_NUMBA.  The first numba call (compilation) is excluded.
"""
import argparse
import json
import time

import numpy as np

from slekit.mc import _nb as mc_nb
from slekit.mc import _np as mc_np
from slekit.sle_core import _nb as core_nb
from slekit.sle_core import _np as core_np
from slekit.sle_core import sample_driving


def _cases():
    d = sample_driving(2.0, 6.0, 0.01, seed=11)
    d_flow = sample_driving(2.0, 1.0, 1e-3, seed=12)
    qr, qi = np.array([0.4]), np.array([0.2])
    pts = core_nb.zipper_uniform(d.values, d.dt)
    pr, pi = np.ascontiguousarray(pts[0]), np.ascontiguousarray(pts[1])
    zr = np.linspace(-0.9, 0.9, 2000)
    zi = np.linspace(0.9, -0.9, 2000)
    return {
        "zipper_uniform (600 steps)": lambda k: k[0].zipper_uniform(d.values, d.dt),
        "zipper_adaptive (kappa=2, one query)": lambda k: k[0].zipper_adaptive(
            d.values, d.dt, 2.0, np.uint64(d.seed), qr, qi, 0.25, 1e-3, 0.1, 24, d.level),
        "flow_trace (1000 RK4 steps)": lambda k: k[0].flow_trace(d_flow.values, d_flow.dt, 1e-6),
        "polyline_distances (2000 queries)": lambda k: k[0].polyline_distances(pr, pi, zr, zi),
        "stamp_distances (r=0.02 grid)": lambda k: k[1].stamp_distances(
            pr, pi, -1.05, -1.05, 0.0025, 840, 840, 0.0325),
    }


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None, help="also write results here")
    args = ap.parse_args(argv)

    rows = []
    for name, call in _cases().items():
        call((core_nb, mc_nb))  # compile
        t_nb = _time(lambda: call((core_nb, mc_nb)), args.repeat)
        t_np = _time(lambda: call((core_np, mc_np)), args.repeat)
        rows.append({"kernel": name, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb})
    width = max(len(r["kernel"]) for r in rows)
    print(f"{'kernel':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for r in rows:
        print(f"{r['kernel']:<{width}}  {r['numba_s'] * 1e3:9.2f}ms  {r['numpy_s'] * 1e3:9.2f}ms  "
              f"{r['speedup']:7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
