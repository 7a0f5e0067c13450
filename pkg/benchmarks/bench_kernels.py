"""Time the numba and numpy kernel backends on H_3 balls.

    python benchmarks/bench_kernels.py --radius 18 --n 14 --ell 4

The first numba call includes compilation and is reported separately.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hbl import kernels


def timed(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--radius", type=int, default=18)
    p.add_argument("--n", type=int, default=14)
    p.add_argument("--ell", type=int, default=4)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if args.n + args.ell > args.radius:
        p.error("need n + ell <= radius")

    t0 = time.perf_counter()
    kernels.h3_ball_arrays(4, "numba")
    _, d4, nb4 = kernels.h3_ball_arrays(6, "numba")
    kernels.shell_distortion(nb4, d4, 3, 2, "numba")
    print(f"numba warm-up (compile): {time.perf_counter() - t0:.2f}s")

    results = {}
    for name in ("numba", "numpy"):
        tb, ball = timed(lambda: kernels.h3_ball_arrays(args.radius, name), args.repeat)
        _, dist, nbr = ball
        ts, shell = timed(lambda: kernels.shell_distortion(nbr, dist, args.n, args.ell, name),
                          args.repeat)
        results[name] = (ball, shell)
        print(f"{name:6s} ball r={args.radius} ({len(dist)} elements): {tb:.3f}s   "
              f"shell n={args.n} ell<={args.ell}: {ts:.3f}s")
    same = all(np.array_equal(x, y) for x, y in zip(results["numba"][0], results["numpy"][0]))
    same &= all(np.array_equal(x, y) for x, y in zip(results["numba"][1], results["numpy"][1]))
    print(f"backends agree: {same}")


if __name__ == "__main__":
    main()
