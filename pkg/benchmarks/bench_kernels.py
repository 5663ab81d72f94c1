"""Compare the compiled and pure-Python search kernels.

Usage: python benchmarks/bench_kernels.py [--budget N] [--repeat R]

Runs goal-count GBFS on scrambled 15-puzzles and Rubik's cubes, plus one
focused-macro learning search, with each available backend, and prints
generated states per second.  Both backends must report the same counts.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from focused_macros import kernels
from focused_macros.domains.cube import RubiksCube, scramble_cube
from focused_macros.domains.npuzzle import NPuzzle, scramble_puzzle


def cases(budget: int):
    puzzle, cube = NPuzzle(4), RubiksCube()
    goal_p = puzzle.default_goal().vector(puzzle.table.n_vars)
    goal_c = cube.default_goal().vector(cube.table.n_vars)
    yield "15-puzzle gbfs", puzzle.table, scramble_puzzle(1, puzzle), dict(mode=kernels.GREEDY, goal=goal_p)
    yield "cube gbfs", cube.table, scramble_cube(60, 1, cube), dict(mode=kernels.GREEDY, goal=goal_c)
    s0 = cube.random_state(np.random.default_rng(0))
    yield "cube focus", cube.table, s0, dict(mode=kernels.FOCUS, lifo=True)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--budget", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"{'case':<16}{'backend':<10}{'generated':>11}{'seconds':>10}{'states/s':>12}")
    for name, table, start, kw in cases(args.budget):
        counts = {}
        for backend in kernels.backends():
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                out = kernels.run_search(table, start, budget=args.budget, backend=backend, **kw)
                best = min(best, time.perf_counter() - t0)
            counts[backend] = out[1]
            print(f"{name:<16}{backend:<10}{out[1]:>11}{best:>10.3f}{out[1] / best:>12.0f}")
        assert len(set(counts.values())) == 1, counts


if __name__ == "__main__":
    main()
