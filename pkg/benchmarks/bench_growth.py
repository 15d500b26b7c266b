#!/usr/bin/env python3
"""Benchmark the pure-Python kernel against the compiled one.

Both kernels follow the same draw-sequence contract, so for every (d, n,
seed) cell the generated trees must be identical; the script asserts that
before printing timings.  The Python kernel gets smaller sizes, otherwise
the table takes minutes.

Usage: python benchmarks/bench_growth.py [--seed N] [--quick]
"""

import argparse
import time

from darygrow.sampler import make_kernel

CELLS = [
    # d, n for the python kernel, n for the cython kernel
    (2, 20_000, 1_000_000),
    (3, 20_000, 1_000_000),
    (5, 10_000, 500_000),
]


def run(kernel_name, d, n, seed):
    k = make_kernel(d, seed, kernel=kernel_name)
    t0 = time.perf_counter()
    k.steps(n)
    wall = time.perf_counter() - t0
    return k, wall


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=20240)
    parser.add_argument("--quick", action="store_true", help="divide sizes by 10")
    args = parser.parse_args()

    shrink = 10 if args.quick else 1
    header = f"{'kernel':<8} {'d':>2} {'n':>9} {'wall s':>9} {'steps/s':>12} {'lex s':>8} {'lex cmp/step':>13}"
    print(header)
    print("-" * len(header))

    for d, n_py, n_cy in CELLS:
        n_py //= shrink
        n_cy //= shrink

        # correctness gate: equal trees at the common size
        a, _ = run("python", d, n_py, args.seed)
        b, _ = run("cython", d, n_py, args.seed)
        assert a.preorder_code() == b.preorder_code(), (
            f"kernel mismatch at d={d}, n={n_py}, seed={args.seed}"
        )

        for name, n in (("python", n_py), ("cython", n_cy)):
            k, wall = run(name, d, n, args.seed)
            print(
                f"{name:<8} {d:>2} {n:>9} {wall:>9.3f} {n / wall:>12.0f} "
                f"{k.lex_seconds:>8.3f} {k.lex_letters_compared / n:>13.2f}"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
