#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Measures the two hot loops (periodogram synthesis, sliding edge statistic)
at the 60 MHz reference design's frame size, plus one full edge-detection
trial (54 frames accumulated). Run:

    python benchmarks/bench_kernels.py [--frames N] [--repeats R]
"""

import argparse
import time

import numpy as np

from wbsense.kernels import _ref

try:
    from wbsense.kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--frames", type=int, default=54, help="frames per edge trial")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    n_e, n_eh = 390_000, 19_500
    power = np.zeros(n_e)
    power[65_000:156_000] = 0.01   # one occupied stretch, roughly a quarter
    power[221_000:312_000] = 0.01  # and another

    backends = [("numpy", _ref)] + ([("compiled", _fast)] if _fast else [])
    if _fast is None:
        print("compiled backend not built (python setup.py build_ext --inplace)")

    psd = np.empty(n_e)
    q = np.zeros(n_e)
    results = {}
    print(f"frame: {n_e} bins, half-window {n_eh}, {args.frames} frames/trial\n")
    print(f"{'kernel':<28}{'numpy':>12}{'compiled':>12}{'speedup':>10}")
    for label, maker in [
        ("fill_psd (one frame)",
         lambda mod: (lambda: mod.fill_psd(psd, power, 1.0, np.random.default_rng(1)))),
        ("edge_accumulate (one frame)",
         lambda mod: (lambda: mod.edge_accumulate(q, psd, n_eh))),
    ]:
        times = {}
        for name, mod in backends:
            times[name] = timeit(maker(mod), args.repeats)
        results[label] = times
        row = f"{label:<28}{times['numpy'] * 1e3:>10.2f}ms"
        if "compiled" in times:
            row += f"{times['compiled'] * 1e3:>10.2f}ms{times['numpy'] / times['compiled']:>9.1f}x"
        print(row)

    def trial(mod):
        rng = np.random.default_rng(2)
        qq = np.zeros(n_e)
        for _ in range(args.frames):
            mod.fill_psd(psd, power, 1.0, rng)
            mod.edge_accumulate(qq, psd, n_eh)

    times = {name: timeit(lambda m=mod: trial(m), max(1, args.repeats // 2))
             for name, mod in backends}
    row = f"{'edge trial (' + str(args.frames) + ' frames)':<28}{times['numpy'] * 1e3:>10.0f}ms"
    if "compiled" in times:
        row += f"{times['compiled'] * 1e3:>10.0f}ms{times['numpy'] / times['compiled']:>9.1f}x"
    print(row)


if __name__ == "__main__":
    main()
