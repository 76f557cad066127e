"""Compare the compiled and pure-Python brute-force kernels.

    python benchmarks/bench_kernels.py [--bound N] [--repeat R]
"""

import argparse
import timeit

from atfkit import _purekernels, kernels

CASES = [("II:3,1,1,1", (1, 1, 1, 3)), ("I:6,1,2,3", (1, 2, 3, 6)), ("I:1,1,5,5", (1, 5, 5, 5))]


def main() -> None:
    p = argparse.ArgumentParser()
    p.add_argument("--bound", type=int, default=120)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    print(f"backend: {kernels.BACKEND}, bound {args.bound}")
    print(f"{'equation':12} {'python s':>10} {'kernel s':>10} {'speedup':>8}")
    for name, (c1, c2, c3, s) in CASES:
        want = _purekernels.ternary_triples(c1, c2, c3, s, args.bound)
        assert kernels.ternary_triples(c1, c2, c3, s, args.bound) == want
        slow = min(timeit.repeat(lambda: _purekernels.ternary_triples(c1, c2, c3, s, args.bound),
                                 number=1, repeat=args.repeat))
        fast = min(timeit.repeat(lambda: kernels.ternary_triples(c1, c2, c3, s, args.bound),
                                 number=1, repeat=args.repeat))
        print(f"{name:12} {slow:10.4f} {fast:10.4f} {slow / fast:8.1f}")


if __name__ == "__main__":
    main()
