"""Compare the compiled GMP elimination kernel with the pure-Python fallback.

    python benchmarks/bench_elim.py [--sizes 20,40,80] [--density 0.3] [--repeat 3]

Each case also checks that both kernels return the same reduced form.
Two workloads are timed: random sparse matrices with small rational
entries, and one Cech differential taken from a real hypercohomology run.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction

from schoberkit.exactalg.backend import compiled_rref, python_rref


def random_rows(n: int, density: float, rng: random.Random) -> list[list[Fraction]]:
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) if rng.random() < density else Fraction(0)
             for _ in range(n)] for _ in range(n)]


def best_of(fn, rows, ncols, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn([list(r) for r in rows], ncols)
        best = min(best, time.perf_counter() - t)
    return best, out


def cech_rows() -> tuple[list[list[Fraction]], int]:
    from schoberkit.lbcx.cech import dense_cech_complex
    from schoberkit.lbcx.derived import koszul_complex

    cx = dense_cech_complex(koszul_complex(2), 0, 4)
    m = max(cx.diffs.values(), key=lambda d: d.shape[0] * d.shape[1])
    return [list(r) for r in m.entries], m.shape[1]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", default="20,40,80")
    ap.add_argument("--density", type=float, default=0.3)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args(argv)

    fast = compiled_rref()
    if fast is None:
        print("compiled kernel not built; only the pure-Python kernel is available", file=sys.stderr)
        return 1
    rng = random.Random(a.seed)
    cases = [(f"random {n}x{n}", random_rows(n, a.density, rng), n) for n in map(int, a.sizes.split(","))]
    rows, ncols = cech_rows()
    cases.append((f"cech {len(rows)}x{ncols}", rows, ncols))

    print(f"{'case':<20} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, rows, ncols in cases:
        tp, rp = best_of(python_rref, rows, ncols, a.repeat)
        tc, rc = best_of(fast, rows, ncols, a.repeat)
        if rp != rc:
            print(f"{name}: kernels disagree", file=sys.stderr)
            return 1
        print(f"{name:<20} {tp:>10.4f} {tc:>11.4f} {tp / tc:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
