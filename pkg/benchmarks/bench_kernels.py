"""Time the numba and numpy backends of the finite-model kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call includes JIT compilation (or a cache load) and is
reported separately.
"""

import argparse
import time

import numpy as np

from hyperseq import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    print(f"numba available: {_kernels.HAVE_NUMBA}")
    for name, kernel in (("filter_mask", _kernels.filter_mask), ("measure_mask", _kernels.measure_mask)):
        if _kernels.HAVE_NUMBA:
            t0 = time.perf_counter()
            kernel(1, "numba")
            print(f"{name:13s} numba warmup {time.perf_counter() - t0:8.4f}s")
        for k in (3, 4):
            ref = kernel(k, "numpy")
            row = []
            for b in backends:
                assert np.array_equal(kernel(k, b), ref), f"{name} backends disagree at k={k}"
                row.append(f"{b} {best_of(lambda: kernel(k, b), args.repeat) * 1e3:9.3f} ms")
            print(f"{name:13s} k={k}  " + "  ".join(row) + f"  hits={int(ref.sum())}")


if __name__ == "__main__":
    main()
