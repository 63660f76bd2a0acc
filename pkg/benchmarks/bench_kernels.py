"""Compare the numba kernels with the pure-numpy fallback.

Kernel timings call both implementations in-process.  The end-to-end
timing runs an angular scan in two subprocesses, with and without
``ABWIRE_DISABLE_NUMBA=1``.

    python benchmarks/bench_kernels.py --repeats 5
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from abwire import _kernels

SCAN = ("import time, numpy as np; from abwire import *;"
        "sp = ScatterParams(0.5, 5.1); grid = np.linspace(0.01, 3.0, {n});"
        "spec = SumSpec(tol={tol}, accel='{accel}');"
        "angular_scan(sp, ThinAbsorbing(), 1.0, grid[:2], spec);"
        "t = time.perf_counter(); angular_scan(sp, ThinAbsorbing(), 1.0, grid, spec);"
        "print(time.perf_counter() - t)")


def best_of(fn, repeats):
    fn()  # warmup, includes jit compilation
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_rows(repeats):
    rng = np.random.default_rng(0)
    coef = rng.normal(size=20000) + 1j * rng.normal(size=20000)
    phis = np.linspace(0.01, 3.0, 64)
    lead = 0.5j * np.pi * 26.26
    rem = (0.5, 26.26, 6, phis, lead, 0.0, 1e-8, 256, 10 ** 7)
    cases = [
        ("fourier_sum 20000 x 64",
         lambda: _kernels._fourier_sum_np(coef, 0, phis, 1.0),
         lambda: _kernels._fourier_sum_jit(coef, 0, phis, 1.0)),
        ("remainder_sum tol 1e-8",
         lambda: _kernels._remainder_sum_np(*rem),
         lambda: _kernels._remainder_sum_jit(*rem)),
    ]
    for name, np_fn, jit_fn in cases:
        yield name, best_of(np_fn, repeats), best_of(jit_fn, repeats)


def scan_time(disable, n, tol, accel):
    env = dict(os.environ)
    env.pop("ABWIRE_DISABLE_NUMBA", None)
    if disable:
        env["ABWIRE_DISABLE_NUMBA"] = "1"
    code = SCAN.format(n=n, tol=tol, accel=accel)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--n-points", type=int, default=64)
    ap.add_argument("--tol", type=float, default=1e-6)
    ap.add_argument("--accel", default="log")
    args = ap.parse_args(argv)

    print(f"{'case':<28}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for name, t_np, t_jit in kernel_rows(args.repeats):
        print(f"{name:<28}{t_np:>12.4g}{t_jit:>12.4g}{t_np / t_jit:>10.1f}")
    t_np = scan_time(True, args.n_points, args.tol, args.accel)
    t_jit = scan_time(False, args.n_points, args.tol, args.accel)
    name = f"scan {args.accel} tol {args.tol:g}"
    print(f"{name:<28}{t_np:>12.4g}{t_jit:>12.4g}{t_np / t_jit:>10.1f}")


if __name__ == "__main__":
    main()
