"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Each workload runs once to warm up (numba compiles on first call), then the
best of ``--repeat`` timed runs is reported. Outputs of the two backends
are checked for agreement before timing.
"""
import argparse
import time

import numpy as np

from elicitkit.hierarchical import ROUNDED_HYPER, sample_population
from elicitkit.kernels import backend_module


def workloads(rng):
    a = rng.uniform(0.3, 50, 200_000)
    b = rng.uniform(0.3, 50, 200_000)
    x = rng.uniform(0, 1, 200_000)
    grid = np.linspace(0, 1, 10_001)
    pop = sample_population(ROUNDED_HYPER, 100_000, 0)
    return {
        "betainc, 200k random triples": lambda k: k.betainc(a, b, x),
        "window payoffs, 10k-point report grid": lambda k: k.window_payoffs(1.5, 4.0, grid, 0.02),
        "opposite flags, 100k sampled beliefs": lambda k: k.opposite_flags(pop.alpha, pop.beta, 0.17, 0.02),
    }


def best_of(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    nb, np_ = backend_module("numba"), backend_module("numpy")
    print(f"{'workload':40s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fn in workloads(np.random.default_rng(0)).items():
        r_nb, r_np = fn(nb), fn(np_)
        for u, v in zip(r_nb if isinstance(r_nb, tuple) else (r_nb,), r_np if isinstance(r_np, tuple) else (r_np,)):
            if u.dtype == bool:
                assert np.array_equal(u, v), name
            else:
                assert np.allclose(u, v, rtol=0, atol=1e-12), name
        t_nb, t_np = best_of(lambda: fn(nb), args.repeat), best_of(lambda: fn(np_), args.repeat)
        print(f"{name:40s} {t_nb * 1e3:8.2f}ms {t_np * 1e3:8.2f}ms {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
