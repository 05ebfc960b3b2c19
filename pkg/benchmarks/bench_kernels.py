"""Compare the compiled and pure-Python fraction-free elimination kernels.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import timeit

from linsym import _kernels_py
from linsym.commutant import commutator_map
from linsym.kernels import BACKEND, rref_fraction_free
from linsym.matrix import Matrix


def workloads():
    rng = random.Random(0)
    out = []
    for n in (3, 4, 5):
        # commutator maps are the largest systems the library solves
        D = Matrix(n, n, [rng.randint(-3, 3) for _ in range(n * n)])
        rows = [[int(v) for v in commutator_map(D).row(i)] for i in range(n * n)]
        out.append((f"commutator map n={n} ({n * n}x{n * n})", rows))
    for size in (12, 24):
        rows = [[rng.randint(-50, 50) for _ in range(size)] for _ in range(size)]
        out.append((f"dense random {size}x{size}", rows))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"active backend: {BACKEND}")
    if BACKEND != "cython":
        print("compiled extension not built; both columns time the Python kernel")
    print(f"{'workload':<34}{'compiled ms':>12}{'python ms':>12}{'speedup':>9}")
    for name, rows in workloads():
        cols = len(rows[0])
        assert rref_fraction_free([r[:] for r in rows], cols) == _kernels_py.rref_fraction_free([r[:] for r in rows], cols)
        fast = min(timeit.repeat(lambda: rref_fraction_free([r[:] for r in rows], cols), number=3, repeat=args.repeat)) / 3
        slow = min(timeit.repeat(lambda: _kernels_py.rref_fraction_free([r[:] for r in rows], cols), number=3, repeat=args.repeat)) / 3
        print(f"{name:<34}{fast * 1e3:>12.2f}{slow * 1e3:>12.2f}{slow / fast:>8.2f}x")


if __name__ == "__main__":
    main()
