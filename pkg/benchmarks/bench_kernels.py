"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so the ERDOS278_PURE_PYTHON switch
does not matter here.  Every case is also checked for equal results.
"""

import argparse
import math
import time

from erdos278 import _fallback

try:
    from erdos278 import _ckernels
except ImportError:  # extension not built
    _ckernels = None

SIEVE_CASES = [
    ("3,6,15,21,33", [0, 1, 2, 4, 5], [3, 6, 15, 21, 33]),
    ("2..12 staggered", list(range(11)), list(range(2, 13))),
    ("7,11,13,17,19", [1, 2, 3, 4, 5], [7, 11, 13, 17, 19]),
    ("7..23 primes", [1, 2, 3, 4, 5, 6], [7, 11, 13, 17, 19, 23]),
]

EXTREMA_CASES = [
    [3, 6, 15, 21],
    [4, 6, 9, 10],
    [5, 6, 7, 8],
    [3, 6, 15, 21, 33],
    [6, 10, 15, 21, 35],
]


def best_time(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not available; only the fallback would run")
        return

    print(f"{'kernel':<16} {'case':<22} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for name, res, mods in SIEVE_CASES:
        period = math.lcm(*mods)
        tc, rc = best_time(lambda: _ckernels.count_uncovered(res, mods, period), args.repeat)
        tp, rp = best_time(lambda: _fallback.count_uncovered(res, mods, period), args.repeat)
        assert rc == rp, (name, rc, rp)
        print(f"{'count_uncovered':<16} {name:<22} {tc:>10.5f} {tp:>10.5f} {tp / tc:>8.1f}")
    for mods in EXTREMA_CASES:
        period = math.lcm(*mods)
        name = ",".join(map(str, mods))
        tc, rc = best_time(lambda: _ckernels.residue_extrema(mods, period), args.repeat)
        tp, rp = best_time(lambda: _fallback.residue_extrema(mods, period), args.repeat)
        assert tuple(rc) == tuple(rp), (name, rc, rp)
        print(f"{'residue_extrema':<16} {name:<22} {tc:>10.5f} {tp:>10.5f} {tp / tc:>8.1f}")


if __name__ == "__main__":
    main()
