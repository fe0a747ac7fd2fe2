"""Time the compiled hull kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--points 2000] [--repeat 5]
"""

import argparse
import random
import timeit

from convexterm.kernels import backends


def _cloud(rng, n, dim, span=10**6):
    return [tuple(rng.randint(-span, span) for _ in range(dim)) for _ in range(n)]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    p2 = _cloud(rng, args.points, 2)
    p3 = _cloud(rng, args.points // 4, 3)
    found = backends()
    if "cython" not in found:
        print("compiled kernels not built; only the Python backend is available")
    rows = []
    for name, mod in found.items():
        t2 = min(timeit.repeat(lambda: mod.hull2d(p2), number=1, repeat=args.repeat))
        t3 = min(timeit.repeat(lambda: mod.hull3d(p3), number=1, repeat=args.repeat))
        rows.append((name, t2, t3))
    print(f"{'backend':<8} {'hull2d (' + str(len(p2)) + ' pts)':>20} {'hull3d (' + str(len(p3)) + ' pts)':>20}")
    for name, t2, t3 in rows:
        print(f"{name:<8} {t2 * 1e3:>17.2f} ms {t3 * 1e3:>17.2f} ms")
    if len(rows) == 2:
        (_, a2, a3), (_, b2, b3) = rows
        print(f"speedup  {a2 / b2:>19.1f}x {a3 / b3:>19.1f}x")


if __name__ == "__main__":
    main()
