"""Wall-clock scaling of the degree-2 decider on random instances."""

import argparse
import time

from boundedgames.generators import gen_random_qbf
from boundedgames.qbf import solve_qbf2


def time_solve(n: int, seed: int, repeats: int) -> tuple[float, str]:
    f = gen_random_qbf(seed, n, n, rank=2, max_degree=2, min_size=1)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out, _ = solve_qbf2(f)
        best = min(best, time.perf_counter() - t0)
    return best, out.winner


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 2000, 4000, 8000])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    prev = None
    for n in args.sizes:
        t, winner = time_solve(n, args.seed, args.repeats)
        ratio = f"{t / prev:5.2f}x" if prev else "     -"
        print(f"n={n:6d}  {t * 1000:9.2f} ms  ratio {ratio}  {winner}")
        prev = t


if __name__ == "__main__":
    main()
