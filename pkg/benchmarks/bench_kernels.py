"""Benchmark the compiled chain kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [max_exponent]

Times lnds_length / lnds_path on uniform random inputs of growing size and
prints one table row per size.  Ends with the 10^7-point engineering check
(chain on a finalized cloud must finish within 10 s on the active backend).
"""

import sys
import time

import numpy as np

from hammerlip import Rect, kernels, longest_chain_standard, sample_poisson_rect
from hammerlip import _kernels_py

try:
    from hammerlip import _kernels as _compiled
except ImportError:
    _compiled = None


def _time(fn, *args) -> float:
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def main() -> int:
    max_exp = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    rng = np.random.default_rng(0)
    print(f"active backend: {kernels.backend()}")
    header = f"{'n':>12} {'cython len':>12} {'python len':>12} {'speedup':>8} {'cython path':>12} {'python path':>12}"
    print(header)
    print("-" * len(header))
    for exp in range(4, max_exp + 1):
        n = 10**exp
        ys = rng.uniform(0.0, 1.0, n)
        t_py_len = _time(_kernels_py.lnds_length, ys)
        t_py_path = _time(_kernels_py.lnds_path, ys)
        if _compiled is not None:
            t_cy_len = _time(_compiled.lnds_length, ys)
            t_cy_path = _time(_compiled.lnds_path, ys)
            ratio = t_py_len / t_cy_len if t_cy_len > 0 else float("inf")
            print(
                f"{n:>12} {t_cy_len:>11.4f}s {t_py_len:>11.4f}s {ratio:>7.1f}x "
                f"{t_cy_path:>11.4f}s {t_py_path:>11.4f}s"
            )
        else:
            print(f"{n:>12} {'n/a':>12} {t_py_len:>11.4f}s {'':>8} {'n/a':>12} {t_py_path:>11.4f}s")

    side = 3162.3  # side^2 ~= 1e7 points at unit intensity
    cloud = sample_poisson_rect(Rect(0.0, side, 0.0, side), 1.0, 123)
    t0 = time.perf_counter()
    result = longest_chain_standard(cloud)
    elapsed = time.perf_counter() - t0
    print(f"\nlongest_chain_standard on {len(cloud):,} points: {elapsed:.2f}s (L = {result.length})")
    print("engineering budget: 10 s ->", "OK" if elapsed <= 10.0 else "EXCEEDED")
    return 0 if elapsed <= 10.0 else 1


if __name__ == "__main__":
    sys.exit(main())
