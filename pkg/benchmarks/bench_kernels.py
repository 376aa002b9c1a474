"""Time the numba and pure-numpy kernel backends on the workloads the library runs.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Each case is run once untimed (JIT warm-up), then ``--repeat`` times; the
best wall time is reported.  Outputs from the two backends are compared so a
speedup never hides a divergence.
"""
import argparse
import json
import math
import platform
import time

import numpy as np

from nlho import OscillatorParams
from nlho._kernels import get_backend
from nlho.classical import composition_coefficients, orbit_period
from nlho.core import x_to_X
from nlho.quantumgrid.grid import Grid
from nlho.quantumgrid.oracle import _tridiag_X


def _best(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    p = OscillatorParams()
    d, e = _tridiag_X(p, Grid(80.0, 7999))
    e2 = e * e
    r = float(np.max(np.abs(d)) + 2 * np.max(np.abs(e)))
    rng = np.random.default_rng(0)
    n = d.size
    dl, du, rhs = e.copy(), e.copy(), rng.normal(size=n)
    shift = d - 0.4756246
    T = orbit_period(1.0, p)
    X0 = float(x_to_X(1.0, p))
    c6 = composition_coefficients(6)
    yield ("bisection: 10 eigenvalues, N=7999",
           lambda B: B.bisect_eigenvalues(d, e2, 0, 10, -r, r, 1e-13, 1e-300))
    yield ("tridiagonal solve, N=7999", lambda B: B.tridiag_solve(dl, shift, du, rhs))
    yield ("leapfrog order 6, 1e5 steps",
           lambda B: B.integrate_leapfrog(X0, 0.0, 1.0, 1.0, 0.1, T / 1000, 100000, c6)[0])
    yield ("rk4 xp chart, 1e5 steps",
           lambda B: B.integrate_rk4(1.0, 0.0, 1.0, 1.0, 0.1, T / 1000, 100000, 1)[0])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", metavar="PATH")
    args = ap.parse_args(argv)
    nb, npb = get_backend("numba"), get_backend("numpy")
    rows = []
    print(f"{'case':40s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s} {'max diff':>10s}")
    for name, fn in cases():
        t_nb, o_nb = _best(lambda: fn(nb), args.repeat)
        t_np, o_np = _best(lambda: fn(npb), args.repeat)
        diff = float(np.max(np.abs(np.asarray(o_nb) - np.asarray(o_np))))
        rows.append({"case": name, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb, "max_abs_diff": diff})
        print(f"{name:40s} {t_nb:11.4g} {t_np:11.4g} {t_np / t_nb:8.1f} {diff:10.2g}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"python": platform.python_version(), "machine": platform.machine(), "results": rows}, fh,
                      indent=2)


if __name__ == "__main__":
    main()
