"""Benchmark the numba and numpy kernel backends against each other.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeats 5]

Each workload is timed per backend after a warmup call, so numba JIT
compilation never counts against the measurement.
"""

import argparse
import time

import numpy as np

from gridlock._kernels import BACKENDS, SOLVER_MOVE_CAP
from gridlock.geometry import CELLS


def _workloads(rng: np.random.Generator):
    grids = [rng.permutation(CELLS).astype(np.int32) for _ in range(512)]
    secrets = [g[rng.choice(CELLS, 4, replace=False)].copy() for g in grids]
    moves = np.array(
        [
            [int(rng.integers(2)), 0, int(rng.integers(1, 5))]
            for _ in range(64)
        ],
        dtype=np.int32,
    )
    for m in moves:
        m[1] = rng.integers(5 if m[0] == 0 else 9)

    def bench_apply(backend):
        for g in grids:
            backend["apply_move"](g, 0, 2, 3)
            backend["apply_move"](g, 1, 4, -2)

    def bench_replay(backend):
        for g in grids[:128]:
            backend["replay"](g, moves)

    def bench_aligned(backend):
        for g, s in zip(grids, secrets):
            backend["is_aligned"](g, s)

    def bench_tuples(backend):
        for g in grids:
            backend["window_tuples"](g)

    def bench_solve(backend):
        for g, s in zip(grids[:128], secrets[:128]):
            backend["solve_window"](g, s, 2, 2)

    return {
        "apply_move x1024": bench_apply,
        "replay 64-move x128": bench_replay,
        "is_aligned x512": bench_aligned,
        "window_tuples x512": bench_tuples,
        "solve_window x128": bench_solve,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    names = sorted(BACKENDS)
    if len(names) < 2:
        print(f"only backends {names} available; run without GRIDLOCK_NUMBA=0 "
              "and with numba installed to compare both")
    rng = np.random.default_rng(2024)
    workloads = _workloads(rng)

    print(f"{'workload':<22}" + "".join(f"{n:>14}" for n in names))
    assert SOLVER_MOVE_CAP >= 1
    for label, fn in workloads.items():
        best = {}
        for name in names:
            backend = BACKENDS[name]
            fn(backend)  # warmup / JIT
            times = []
            for _ in range(args.repeats):
                start = time.perf_counter()
                fn(backend)
                times.append(time.perf_counter() - start)
            best[name] = min(times)
        row = f"{label:<22}" + "".join(f"{best[n] * 1e3:>11.2f} ms" for n in names)
        if len(names) == 2:
            a, b = names
            ratio = best[b] / best[a] if best[a] else float("inf")
            row += f"   ({a} {ratio:.1f}x vs {b})" if ratio >= 1 else (
                f"   ({b} {1 / ratio:.1f}x vs {a})"
            )
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
