"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one row per workload with the median wall time of each backend.
"""
import argparse
import statistics
import time

import numpy as np

from melotemplate import _kernels_py

try:
    from melotemplate import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def _median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def workloads(rng):
    em = np.ascontiguousarray(rng.integers(-16, 17, (200, 24)) * 0.5)
    em84 = np.ascontiguousarray(rng.integers(-16, 17, (200, 84)) * 0.5)
    x = rng.integers(-10_000, 10_000, 800).astype(np.int64)
    y = rng.integers(-10_000, 10_000, 700).astype(np.int64)
    return [
        ("viterbi 200 bars x 24 triads", "viterbi_lex", (em, 1.0)),
        ("viterbi 200 bars x 84 chords", "viterbi_lex", (em84, 1.0)),
        ("dtw 800 x 700 sixteenths", "dtw_int", (x, y)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'workload':32s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for label, name, inputs in workloads(rng):
        py = _median_time(lambda: getattr(_kernels_py, name)(*inputs), args.repeat)
        if _compiled is None:
            print(f"{label:32s} {py:10.4f} {'n/a':>10s} {'':>8s}")
            continue
        out_py = getattr(_kernels_py, name)(*inputs)
        out_c = getattr(_compiled, name)(*inputs)
        assert np.array_equal(np.asarray(out_py), np.asarray(out_c)), f"{name} backends disagree"
        cy = _median_time(lambda: getattr(_compiled, name)(*inputs), args.repeat)
        print(f"{label:32s} {py:10.4f} {cy:10.5f} {py / cy:7.0f}x")


if __name__ == "__main__":
    main()
