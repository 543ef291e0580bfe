"""Compiled versus pure-Python erf kernel.

Times the complex erf on random points of the validated box, then a
detection-ratio sweep like figure 2 (every point goes through the
Gaussian interval integral), once per backend.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]
"""
import argparse
import time

import numpy as np

from dissipair import ck_kernel, Environment, GaussianPacket
from dissipair import pairs, special


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def erf_points(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.uniform(-6, 6, n) + 1j * rng.uniform(-6, 6, n)


def sweep():
    a = GaussianPacket(0.0, 3.0, 1.0)
    b = GaussianPacket(0.0, 3.0, 0.9)
    for gamma in np.linspace(0.0, 1.0, 41):
        kernel = ck_kernel(a, b, Environment(gamma=gamma))
        for t in np.linspace(0.0, 50.0, 26):
            for s in ("be", "fd"):
                pairs.detection_ratio_single(s, kernel, t, 1.0)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    z = erf_points(args.points)
    compiled = special.kernel("compiled")
    python = special.kernel("python")
    gap = np.max(np.abs(compiled.erf_array(z) - python.erf_array(z)) / np.abs(python.erf_array(z)))
    print(f"erf_array parity, max relative gap: {gap:.2e}")

    rows = []
    for name in ("compiled", "python"):
        kern = special.kernel(name)
        rows.append((f"erf_array x{args.points}", name, best_of(lambda: kern.erf_array(z), args.repeat)))
    previous = special.set_backend("compiled")
    try:
        for name in ("compiled", "python"):
            special.set_backend(name)
            rows.append(("figure-2 sweep", name, best_of(sweep, args.repeat)))
    finally:
        special.set_backend(previous)

    print(f"{'case':<22}{'backend':<10}{'seconds':>10}")
    for case, name, sec in rows:
        print(f"{case:<22}{name:<10}{sec:>10.4f}")
    for case in dict.fromkeys(r[0] for r in rows):
        times = {name: sec for c, name, sec in rows if c == case}
        print(f"{case}: compiled is {times['python'] / times['compiled']:.1f}x faster")


if __name__ == "__main__":
    main()
