"""Compare the compiled and numpy ratio kernels.

    python benchmarks/bench_kernels.py [--repeat 200]

Times the raw kernel over several team sizes and a full manipulation
search, which calls the kernel once per grid point.
"""

import argparse
import time

import numpy as np

from peereval import _backend, simlab


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=200)
    args = parser.parse_args()

    kernels = _backend.KERNELS
    if "cython" not in kernels:
        print("compiled kernel not built; only the numpy fallback is available")
    rng = np.random.default_rng(0)

    print(f"{'n':>4} " + " ".join(f"{name + ' (us)':>14}" for name in kernels) + "   max |diff|")
    for n in (3, 5, 10, 20, 40, 80):
        a = rng.uniform(0, 10, (n, n))
        w = rng.uniform(0, 1, n)
        times = [best_of(lambda k=k: k(a, w), args.repeat) * 1e6 for k in kernels.values()]
        outs = [k(a, w)[0] for k in kernels.values()]
        diff = max(float(np.max(np.abs(o - outs[0]))) for o in outs)
        print(f"{n:>4} " + " ".join(f"{t:>14.1f}" for t in times) + f"   {diff:.1e}")

    print()
    t = [0.1, 0.2, 0.3, 0.4]
    for name, kernel in kernels.items():
        _backend.ratio_sums = kernel
        dt = best_of(lambda: simlab.manipulation_search(t, 3, 40, objective="final_score"), 1)
        print(f"manipulation search n=4 res=40 final_score [{name}]: {dt:.2f} s")


if __name__ == "__main__":
    main()
