"""Compare the compiled scan kernel against the pure-python fallback.

Runs the fixed-point scan over a few mid-size groups with both
backends, checks that the counts agree, and prints the timings.

    python3 benchmarks/bench_kernels.py [--threads N] [--repeat R]
"""

import argparse
import sys
import time

from primbase import families
from primbase.fixscan import backend_name, max_fixed_points

CASES = (
    "SymSubsets(m=8,k=2)",
    "Affine(d=4,q=2)",
    "LinearOnPk(d=4,k=1,q=2)",
    "OmegaOnS1(d=6,q=2,sign=-)",
    "SpOnSk(d=6,k=1,q=2)",
)


def best_time(chain, kernel, threads, repeat):
    result, elapsed = None, float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        count, _, _ = max_fixed_points(chain, threads=threads, kernel=kernel)
        elapsed = min(elapsed, time.perf_counter() - start)
        result = count
    return result, elapsed


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    if backend_name() != "c":
        print("warning: compiled kernel unavailable, timing py against itself")

    header = f"{'action':34} {'n':>4} {'order':>10} {'c [s]':>8} {'py [s]':>8} {'ratio':>6}"
    print(header)
    print("-" * len(header))
    mismatches = 0
    for text in CASES:
        action = families.build(text)
        chain = action.group.build_chain()
        c_count, c_time = best_time(chain, "c", args.threads, args.repeat)
        py_count, py_time = best_time(chain, "py", args.threads, args.repeat)
        ratio = py_time / c_time if c_time else float("inf")
        flag = ""
        if c_count != py_count:
            mismatches += 1
            flag = f"  COUNT MISMATCH {c_count} != {py_count}"
        print(
            f"{text:34} {action.n:>4} {action.group.order():>10} "
            f"{c_time:>8.3f} {py_time:>8.3f} {ratio:>5.1f}x{flag}"
        )
    if mismatches:
        print(f"{mismatches} backend disagreements", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
