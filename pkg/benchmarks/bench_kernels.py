"""Compare the numba and numpy permanent/determinant kernels.

    python benchmarks/bench_kernels.py [--max-n 12] [--repeat 200]

Part 1 times each kernel directly on random 0/1 matrices.  Part 2 runs the
full ``check-oracle`` sweep in a subprocess per backend, selected with the
``QSPACE_DISABLE_NUMBA`` flag, so the end-to-end effect is visible too.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from qspace import _kernels


def best_of(fn, mats, rounds=3):
    best = float("inf")
    for _ in range(rounds):
        t0 = time.perf_counter()
        for m in mats:
            fn(m)
        best = min(best, time.perf_counter() - t0)
    return best / len(mats)


def kernel_table(max_n, repeat):
    rng = np.random.default_rng(0)
    # warm up the JIT so compile time is not counted
    _kernels.permanent_numba(np.eye(2, dtype=np.int64))
    _kernels.determinant_numba(np.eye(2, dtype=np.int64))
    print(f"{'n':>3} {'perm numba':>12} {'perm numpy':>12} {'det numba':>12} {'det numpy':>12}   (us per call)")
    for n in range(2, max_n + 1):
        mats = [rng.integers(0, 2, size=(n, n)).astype(np.int64) for _ in range(repeat)]
        for m in mats[:5]:
            assert _kernels.permanent_numba(m) == _kernels.permanent_numpy(m)
            assert _kernels.determinant_numba(m) == _kernels.determinant_numpy(m)
        row = [best_of(f, mats) * 1e6 for f in (_kernels.permanent_numba, _kernels.permanent_numpy,
                                                 _kernels.determinant_numba, _kernels.determinant_numpy)]
        print(f"{n:>3} " + " ".join(f"{t:12.2f}" for t in row))


def sweep_timing(levels, max_len):
    cmd = [sys.executable, "-m", "qspace.cli", "check-oracle", "--levels", str(levels), "--max-len", str(max_len)]
    print(f"\ncheck-oracle --levels {levels} --max-len {max_len} (wall time, includes interpreter start and JIT)")
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, QSPACE_DISABLE_NUMBA=flag)
        t0 = time.perf_counter()
        proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
        elapsed = time.perf_counter() - t0
        status = proc.stdout.strip().splitlines()[-1] if proc.stdout else proc.stderr.strip()
        print(f"  {label:<6} {elapsed:7.2f}s  {status}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=12)
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--sweep-levels", type=int, default=4)
    parser.add_argument("--sweep-len", type=int, default=5)
    args = parser.parse_args()
    kernel_table(args.max_n, args.repeat)
    sweep_timing(args.sweep_levels, args.sweep_len)


if __name__ == "__main__":
    main()
