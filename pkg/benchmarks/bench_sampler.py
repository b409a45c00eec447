"""Benchmark the compiled pair-sampling kernel against the NumPy fallback.

Run: python benchmarks/bench_sampler.py [n ...]

Both implementations must produce identical edge sets; the benchmark
asserts that before timing.
"""

import sys
import time

import numpy as np

from dcsbm._core import IMPLEMENTATION, _impl
from dcsbm._core import _pairs_np
from dcsbm.presets import eppm


def bench(fn, args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(sizes):
    if IMPLEMENTATION != "cython":
        print("compiled kernel not available; benchmarking fallback only")
    print(f"{'n':>6} {'pairs':>12} {'numpy (s)':>10} {'cython (s)':>11} {'speedup':>8}")
    for n in sizes:
        p = eppm(n)
        args = (
            12345,
            np.ascontiguousarray(p.weights),
            np.ascontiguousarray(p.sigma),
            np.ascontiguousarray(p.block),
            1.0 / (p.n * p.d_bar),
        )
        t_np, (u1, v1) = bench(_pairs_np.sample_edges, args)
        if IMPLEMENTATION == "cython":
            t_cy, (u2, v2) = bench(_impl.sample_edges, args)
            assert np.array_equal(u1, u2) and np.array_equal(v1, v2), "kernel mismatch"
        else:
            t_cy = float("nan")
        pairs = n * (n - 1) // 2
        speedup = t_np / t_cy if t_cy == t_cy else float("nan")
        print(f"{n:>6} {pairs:>12} {t_np:>10.4f} {t_cy:>11.4f} {speedup:>8.2f}")


if __name__ == "__main__":
    sizes = [int(a) for a in sys.argv[1:]] or [500, 1000, 2000, 4000]
    main(sizes)
