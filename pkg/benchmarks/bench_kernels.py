"""Compare the numba kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 40 80 160] [--repeat 5]
"""

import argparse
import time

import numpy as np

from tameposets import _kernels as k


def best_of(fn, repeat):
    fn()  # warm-up (includes JIT compilation for numba)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--prime", type=int, default=5)
    args = ap.parse_args()
    if not hasattr(k, "rref_numba"):
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<8}{'n':>6}{'numpy [ms]':>14}{'numba [ms]':>14}{'speedup':>10}")
    for n in args.sizes:
        adj = np.triu(rng.random((n, n)) < 4 / n, 1)
        leq = k.closure_numpy(adj)
        mat = rng.integers(0, args.prime, size=(n, n + 7)).astype(np.int64)
        cases = [
            ("rref", lambda: k.rref_numpy(mat, args.prime), lambda: k.rref_numba(mat, args.prime)),
            ("closure", lambda: k.closure_numpy(adj), lambda: k.closure_numba(adj)),
            ("hasse", lambda: k.hasse_numpy(leq), lambda: k.hasse_numba(leq)),
        ]
        for name, slow, fast in cases:
            a, b = best_of(slow, args.repeat), best_of(fast, args.repeat)
            print(f"{name:<8}{n:>6}{a * 1e3:>14.3f}{b * 1e3:>14.3f}{a / b:>10.1f}")


if __name__ == "__main__":
    main()
