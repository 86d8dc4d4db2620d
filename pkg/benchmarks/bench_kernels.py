#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs each kernel on representative workloads under both backends and prints a
speedup table.  Invoke from the repository root:

    python3 benchmarks/bench_kernels.py [--points 20000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from polyconic import _kernels


def _time(fn, args, repeat):
    fn(*args)  # warm-up (JIT compile / cache touch)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=20000, help="query points")
    parser.add_argument("--focuses", type=int, default=60, help="focuses per sum")
    parser.add_argument("--segments", type=int, default=4096, help="segments per chain")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    qx = rng.standard_normal(args.points)
    qy = rng.standard_normal(args.points)
    fx = rng.standard_normal(args.focuses)
    fy = rng.standard_normal(args.focuses)
    w = rng.uniform(0.5, 2.0, args.focuses)
    ang = np.linspace(0, 2 * np.pi, args.segments + 1)
    ax, ay = np.cos(ang[:-1]), np.sin(ang[:-1])
    bx, by = np.cos(ang[1:]), np.sin(ang[1:])

    workloads = {
        "sum_dists": (qx, qy, fx, fy, w),
        "grad_sums": (qx, qy, fx, fy, w),
        "hess_sums": (qx, qy, fx, fy, w),
        "min_focal_dist": (qx, qy, fx, fy),
        "seg_min_dists": (qx, qy, ax, ay, bx, by),
    }

    numba_impls = _kernels._NUMBA_IMPLS
    if numba_impls is None:
        print("numba backend unavailable (POLYCONIC_NUMBA=0 or numba missing); "
              "timing numpy only")
    print(f"{args.points} points, {args.focuses} focuses, {args.segments} segments\n")
    header = f"{'kernel':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, wl in workloads.items():
        t_np = _time(_kernels._NUMPY_IMPLS[name], wl, args.repeat)
        if numba_impls is not None:
            t_nb = _time(numba_impls[name], wl, args.repeat)
            print(f"{name:<16}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.2f}x")
        else:
            print(f"{name:<16}{t_np * 1e3:>12.3f}{'-':>12}{'-':>10}")

    # agreement check
    print("\nmax relative disagreement numpy vs numba:")
    if numba_impls is not None:
        for name, wl in workloads.items():
            a = _kernels._NUMPY_IMPLS[name](*wl)
            b = numba_impls[name](*wl)
            if isinstance(a, tuple):
                rel = max(
                    float(np.max(np.abs(x - y) / np.maximum(np.abs(x), 1e-300)))
                    for x, y in zip(a, b)
                    if x.dtype.kind == "f"
                )
            else:
                rel = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
            print(f"  {name:<16}{rel:.3e}")


if __name__ == "__main__":
    main()
