#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Times the exact solver and each tree builder on seeded instances for both
backends, checks that the outputs match exactly, and prints a table with
the speedups.

Usage: python benchmarks/compare_backends.py [--sizes 6,10,14] [--per-size 5]
"""

import argparse
import time

from seqclass import kernels
from seqclass.exact import solve_dp
from seqclass.generator import GridCellSpec, gen_problem
from seqclass.heuristics import build_entropy_tree, build_hybrid_tree, build_signature_tree
from seqclass.tree import expected_cost


def _timed(fn, problem, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(problem)
        best = min(best, time.perf_counter() - t0)
    return best, out


BUILDERS = {
    "dp": lambda p: solve_dp(p)[0],
    "entropy": build_entropy_tree,
    "signature": build_signature_tree,
    "hybrid": build_hybrid_tree,
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="6,8,10,12,14,16")
    parser.add_argument("--per-size", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if "native" not in kernels.available_backends():
        print("compiled kernels are not built; nothing to compare")
        return 1

    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'size':>5} {'method':<10} {'pure ms':>10} {'native ms':>10} {'speedup':>8}")
    for size in sizes:
        problems = [
            gen_problem(GridCellSpec(size, size, 2, 4, args.per_size, args.seed), i)
            for i in range(args.per_size)
        ]
        for name, build in BUILDERS.items():
            times = {}
            trees = {}
            for backend in ("pure", "native"):
                previous = kernels.use(backend)
                try:
                    build(problems[0])  # warm-up
                    total = 0.0
                    out = []
                    for problem in problems:
                        t, tree = _timed(build, problem, args.repeats)
                        total += t
                        out.append(tree)
                    times[backend] = total * 1000.0 / len(problems)
                    trees[backend] = out
                finally:
                    kernels.use(previous)
            for a, b, problem in zip(trees["pure"], trees["native"], problems):
                if a != b:
                    raise AssertionError(
                        f"backend mismatch for {name} at size {size}: "
                        f"{expected_cost(a, problem)} vs {expected_cost(b, problem)}"
                    )
            print(
                f"{size:>5} {name:<10} {times['pure']:>10.3f} {times['native']:>10.3f} "
                f"{times['pure'] / times['native']:>7.1f}x"
            )
    print("\nall outputs identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
