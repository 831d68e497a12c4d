"""Time the compiled kernels against the numpy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat N] [--rows N]

Prints one line per kernel with the best time of each backend and the
speedup. Outputs are compared before timing; a mismatch aborts.
"""

import argparse
import sys
import timeit

import numpy as np

from shiftaut import kernels
from shiftaut.fixtures import toy_belt
from shiftaut.groups import Integers, ball
from shiftaut.marker import MarkerProblem
from shiftaut.subshift import LanguageOracle, all_rows, full_shift


def workloads(n_rows: int, rng):
    Z = Integers()
    rows = rng.integers(0, 2, size=(n_rows, 16), dtype=np.int32)
    nbr = np.array([[j, j + 1, j + 2] for j in range(14)], dtype=np.int32)
    table = rng.integers(0, 2, size=8, dtype=np.int32)
    yield "lookup_rows", (rows, nbr, table, 2)

    cols = np.array([[j, j + 1, j + 2, j + 3] for j in range(12)], dtype=np.int32)
    vals = rng.integers(0, 2, size=(12, 4), dtype=np.int32)
    yield "match_placements", (rows, cols, vals)

    problem = MarkerProblem(LanguageOracle(full_shift(Z, (0, 1))), [0], ball(Z, 8))
    pa, pb, ptr = problem.pair_arrays()
    yield "overlap_free", (all_rows(2, len(problem.support))[:n_rows], pa, pb, ptr)

    belt = toy_belt()
    arr = belt.arrays()
    n = 32
    codes = arr["code"][rng.integers(0, len(belt.alphabet), size=(n_rows, n), dtype=np.int32)]
    pos = rng.integers(0, n, size=n_rows, dtype=np.int32)
    trk = rng.integers(0, 2, size=n_rows, dtype=np.int32)
    yield "belt_walk", (codes, belt.neighbours(list(range(n))), arr["inv_s"], arr["back"], arr["fwd"], pos, trk, 16, True)

    nxt = np.tile(np.roll(np.arange(64, dtype=np.int32), -1), (max(1, n_rows // 64), 1))
    nxt[:, 31] = -1
    yield "orbit_labels", (nxt,)


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--rows", type=int, default=20000)
    args = ap.parse_args(argv)
    backends = kernels.backends()
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is available", file=sys.stderr)
    rng = np.random.default_rng(0)
    print(f"{'kernel':18s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, inputs in workloads(args.rows, rng):
        outs = {b: getattr(m, name)(*inputs) for b, m in backends.items()}
        ref = outs["python"]
        for b, out in outs.items():
            if not same(ref, out):
                print(f"{name}: {b} disagrees with the fallback", file=sys.stderr)
                return 1
        times = {b: min(timeit.repeat(lambda m=m: getattr(m, name)(*inputs), number=1, repeat=args.repeat))
                 for b, m in backends.items()}
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{name:18s} " + " ".join(f"{t * 1e3:9.2f}ms" for t in times.values()) + f"   {speed:6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
