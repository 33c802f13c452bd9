"""Compare compiled and pure-Python sparse kernels.

    python benchmarks/bench_kernels.py [--sizes 10000 100000 1000000] [--mod 13]

The sparse operand is theta(-q) = 1 + 2 sum (-1)^k q^(k^2), the divisor used
for overpartition residues, so the work per size is O(n sqrt(n)).
"""

import argparse
import time
from math import isqrt

import numpy as np

from overpart import kernels


def theta_terms(n):
    ks = np.arange(0, isqrt(n - 1) + 1, dtype=np.int64)
    vals = np.where(ks % 2 == 0, 2, -2).astype(np.int64)
    vals[0] = 1
    return ks * ks, vals


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = fn()
        times.append(time.perf_counter() - t0)
    return min(times), res


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    ap.add_argument("--mod", type=int, default=13)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; timing the python backend only")
    m = args.mod
    print(f"{'kernel':<6} {'n':>10} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n in args.sizes:
        idx, val = theta_terms(n)
        rng = np.random.default_rng(n)
        dense = rng.integers(0, m, size=n).astype(kernels.residue_dtype(m))
        for name, call in (
            ("mul", lambda b: kernels.sparse_mul_mod(dense, idx, val, m, n, backend=b)),
            ("div", lambda b: kernels.sparse_div_mod([1], idx, val, m, n, backend=b)),
        ):
            timings, results = {}, {}
            for b in backends:
                timings[b], results[b] = best_of(lambda: call(b), args.repeat)
            if len(results) == 2 and not np.array_equal(results["cython"], results["python"]):
                raise SystemExit(f"backends disagree on {name} at n={n}")
            speed = f"{timings['python'] / timings['cython']:8.1f}x" if len(timings) == 2 else ""
            cols = " ".join(f"{timings[b] * 1000:8.1f}ms" for b in backends)
            print(f"{name:<6} {n:>10} {cols} {speed}")


if __name__ == "__main__":
    main()
