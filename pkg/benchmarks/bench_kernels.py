"""Benchmark the neighbor-search kernels: numba vs numpy vs k-d tree.

Times the two hot primitives of the transfer-entropy estimator (joint-space
k-th-neighbor radius, fused strict counts in the three marginal subspaces)
on workloads shaped like the estimation paths: standardized Gaussian clouds
of M points in 2L+1 dimensions. All three routes return identical results;
a sanity check asserts it on every case.

Run:  python benchmarks/bench_kernels.py [--sizes 5000,10000] [--lags 1,2,5]
"""

import argparse
import time

import numpy as np

from redte.kernels import _numba_impl, _numpy_impl
from redte.neighbors import ksg_marginal_counts, kth_neighbor_radius


def time_call(fn, *args, repeat=1):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_case(m, lag, k, rng):
    dim = 2 * lag + 1
    pts = np.ascontiguousarray(rng.standard_normal((m, dim)))

    t_tree, radii = time_call(kth_neighbor_radius, pts, k, "tree")
    t_rad_nb, r_nb = time_call(_numba_impl.kth_radius_brute, pts, k)
    t_rad_np, r_np = time_call(_numpy_impl.kth_radius_brute, pts, k)
    assert np.array_equal(radii, r_nb) and np.array_equal(radii, r_np)

    t_sub, c_sub = time_call(ksg_marginal_counts, pts, lag, radii, "subspaces")
    t_cnt_nb, c_nb = time_call(_numba_impl.ksg_counts_brute, pts, lag, radii)
    t_cnt_np, c_np = time_call(_numpy_impl.ksg_counts_brute, pts, lag, radii)
    for a, b, c in zip(c_sub, c_nb, c_np):
        assert np.array_equal(a, b) and np.array_equal(a, c)

    print(
        f"M={m:6d} d={dim:2d} | radius  tree {t_tree * 1e3:8.1f}ms"
        f"  numba {t_rad_nb * 1e3:8.1f}ms  numpy {t_rad_np * 1e3:8.1f}ms"
    )
    print(
        f"{'':14s}| counts  tree {t_sub * 1e3:8.1f}ms"
        f"  numba {t_cnt_nb * 1e3:8.1f}ms  numpy {t_cnt_np * 1e3:8.1f}ms"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="2000,5000,10000")
    parser.add_argument("--lags", default="1,2,5")
    parser.add_argument("--k", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    lags = [int(s) for s in args.lags.split(",")]

    rng = np.random.default_rng(args.seed)
    # warm up the jit compilation before timing
    warm = np.ascontiguousarray(rng.standard_normal((600, 3)))
    _numba_impl.kth_radius_brute(warm, 3)
    _numba_impl.ksg_counts_brute(warm, 1, np.full(600, 0.1))

    for m in sizes:
        for lag in lags:
            bench_case(m, lag, args.k, rng)


if __name__ == "__main__":
    main()
