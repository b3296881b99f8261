"""Benchmark the compiled Monte Carlo kernels against the pure-Python fallback.

Also verifies the two backends agree bit for bit on the benchmark workloads
(the correctness contract between them).

Run:  python3 benchmarks/bench_kernels.py [trials]
"""

import math
import sys
import time

import numpy as np

from bistaticdc.kernels import available_backends
from bistaticdc.stochastic import stream_key

DEG5 = math.radians(5.0)
KEY = stream_key(12345)

ORACLE_ARGS = (1.0, 1.0, 1.5, 2.345e-3, 8.283894e-12)
GEOMETRIC_ARGS = (
    5.0,  # baseline
    30.0,  # kappa
    False,  # lemniscate
    False,  # range cell
    DEG5,
    DEG5,
    0.0749481145,  # range halfwidth
    -100.0,
    100.0,
    -100.0,
    100.0,
    40.0,  # mean clutter count
    1.0,
    1.0,
    10.0 / (DEG5 * DEG5),  # power gain
    0.005,
    8.283894e-12,
)


def time_call(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return time.perf_counter() - start, result


def main():
    trials = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
    backends = available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; build with `pip install -e .` first")
        return 1

    workloads = [
        ("oracle_trials", "oracle_trials", ORACLE_ARGS),
        ("geometric_trials (beam, 40 clutter pts)", "geometric_trials", GEOMETRIC_ARGS),
    ]
    print(f"{trials} trials per workload\n")
    print(f"{'workload':44s} {'reference':>12s} {'compiled':>12s} {'speedup':>9s}  identical")
    for label, fn_name, args in workloads:
        t_ref, out_ref = time_call(getattr(backends["reference"], fn_name), KEY, 0, trials, *args)
        t_com, out_com = time_call(getattr(backends["compiled"], fn_name), KEY, 0, trials, *args)
        same = all(
            np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
            for a, b in zip(out_ref, out_com)
        )
        print(f"{label:44s} {t_ref:10.3f} s {t_com:10.4f} s {t_ref / t_com:8.1f}x  {same}")
        if not same:
            print("  ERROR: backends disagree; the fallback contract is broken")
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
