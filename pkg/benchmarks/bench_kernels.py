"""Benchmark the compiled vertex-enumeration kernel against the pure-Python
fallback on identical inputs.

Usage: python3 benchmarks/bench_kernels.py [N ...]   (default sizes 14 16 18)
"""

import sys
import time

import numpy as np

from starvlc._kernels import BACKEND, enumerate_vertices, enumerate_vertices_py


def bench(kernel, args, sic, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = kernel(*args, sic)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv):
    sizes = [int(a) for a in argv[1:]] or [14, 16, 18]
    rng = np.random.default_rng(0)
    print(f"active backend: {BACKEND}")
    print(f"{'N':>4} {'vertices':>10} {'python (s)':>12} {'compiled (s)':>13} {'speedup':>8}")
    for n in sizes:
        h_los = 5e-5
        hr = np.ascontiguousarray(rng.uniform(0.0, 5e-5, size=n))
        ht = np.ascontiguousarray(rng.uniform(0.0, 5e-5, size=n))
        args = (h_los, hr, ht, 0.07, 0.07, 1e-10)
        t_py, res_py = bench(enumerate_vertices_py, args, True)
        if enumerate_vertices is enumerate_vertices_py:
            print(f"{n:>4} {2**n:>10} {t_py:>12.4f} {'n/a':>13} {'n/a':>8}")
            continue
        t_cy, res_cy = bench(enumerate_vertices, args, True)
        assert res_cy[0] == res_py[0], "backends disagree on the optimum"
        print(f"{n:>4} {2**n:>10} {t_py:>12.4f} {t_cy:>13.4f} {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main(sys.argv)
