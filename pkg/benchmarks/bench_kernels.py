"""Compare the compiled and pure-Python modular elimination kernels.

    python benchmarks/bench_kernels.py [--sizes 8 16 32] [--repeat 5] [--seed 0]

Both kernels run on identical random residue matrices over Z/p^N and their
outputs are checked for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import copy
import statistics
import time

import numpy as np

from ckperiods.scalars import kernels


def random_system(rng, n: int, p: int, N: int):
    mod = p**N
    rows = []
    for _ in range(n):
        row = [int(x) for x in rng.integers(0, mod, size=n + 1)]
        # scatter p-divisible entries so pivot selection matters
        for j in range(n):
            if rng.random() < 0.3:
                row[j] = row[j] * p**int(rng.integers(1, 3)) % mod
        rows.append(row)
    return rows


def time_kernel(fn, rows, n, p, N, repeat):
    times, result = [], None
    for _ in range(repeat):
        work = copy.deepcopy(rows)
        t0 = time.perf_counter()
        out = fn(work, n, p, N)
        times.append(time.perf_counter() - t0)
        result = (out, work)
    return statistics.median(times), result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 48])
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--precision", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"backend selected at import: {kernels.BACKEND}")
    if kernels.BACKEND != "compiled":
        print("compiled kernel unavailable; timing the Python kernel only")
    print(f"{'p':>3} {'n':>4} {'python ms':>11} {'compiled ms':>12} {'speedup':>8}")
    for p in args.primes:
        for n in args.sizes:
            rows = random_system(rng, n, p, args.precision)
            t_py, r_py = time_kernel(kernels.eliminate_mod_python, rows, n, p, args.precision, args.repeat)
            if kernels.BACKEND == "compiled":
                t_c, r_c = time_kernel(kernels.eliminate_mod_compiled, rows, n, p, args.precision, args.repeat)
                if r_c != r_py:
                    raise SystemExit(f"kernels disagree at p={p}, n={n}")
                print(f"{p:>3} {n:>4} {t_py * 1e3:>11.2f} {t_c * 1e3:>12.2f} {t_py / t_c:>7.1f}x")
            else:
                print(f"{p:>3} {n:>4} {t_py * 1e3:>11.2f} {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
