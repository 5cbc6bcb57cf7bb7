"""Benchmark the hot kernels: numba lane vs pure-numpy lane.

Usage: python benchmarks/bench_kernels.py [--sizes 100,300,600]
The numba lane only appears when numba is importable and
FJ_INFLUENCE_NO_NUMBA is unset.
"""

import argparse
import time

import numpy as np

from fj_influence import _kernels


def bench(func, n_warmup=2, n_iter=10):
    for _ in range(n_warmup):
        func()
    start = time.perf_counter()
    for _ in range(n_iter):
        func()
    return (time.perf_counter() - start) / n_iter * 1000.0  # ms


def make_instance(rng, n):
    w = rng.uniform(0.05, 1.0, (n, n))
    w /= w.sum(axis=1, keepdims=True)
    beta = np.zeros(n)
    beta[rng.choice(n, 2, replace=False)] = (0.1, 0.3)
    a = np.eye(n) - (1.0 - beta)[:, None] * w
    rhs = np.diag(beta)
    x0 = rng.uniform(-1, 1, n)
    return w, beta, a, rhs, x0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="100,300,600")
    parser.add_argument("--iters", type=int, default=10)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    lanes = _kernels.available_lanes()
    print(f"lanes: {', '.join(lanes)} (default lane numba: {_kernels.USING_NUMBA})")
    rng = np.random.default_rng(0)

    header = f"{'kernel':<22}{'n':>6}" + "".join(f"{name:>14}" for name in lanes)
    print(header)
    print("-" * len(header))
    for n in sizes:
        w, beta, a, rhs, x0 = make_instance(rng, n)
        row = {}
        for name, (factor, solve, iterate) in lanes.items():
            def run_solve():
                lu, piv, ok = factor(a.copy())
                assert ok
                return solve(lu, piv, rhs.copy())

            row[name] = bench(run_solve, n_iter=args.iters)
        print(f"{'lu factor+solve':<22}{n:>6}"
              + "".join(f"{row[name]:>12.2f}ms" for name in lanes))

        row = {}
        for name, (factor, solve, iterate) in lanes.items():
            def run_iterate():
                return iterate(w, 1.0 - beta, beta * x0, np.zeros(n),
                               1e-12, 10**6)

            row[name] = bench(run_iterate, n_iter=args.iters)
        print(f"{'fixed-point iterate':<22}{n:>6}"
              + "".join(f"{row[name]:>12.2f}ms" for name in lanes))

    # sanity: lanes agree on the solution
    lu_results = []
    for factor, solve, _ in lanes.values():
        lu, piv, ok = factor(a.copy())
        lu_results.append(solve(lu, piv, rhs.copy()))
    if len(lu_results) > 1:
        drift = float(np.max(np.abs(lu_results[0] - lu_results[1])))
        print(f"max drift between lanes: {drift:.2e}")


if __name__ == "__main__":
    main()
