"""Benchmark the compiled kernels against the NumPy fallback.

Runs each hot kernel on sized inputs with both backends, checks they
agree, and prints a timing table with speedups.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from roadnet.kernels import _core, _fallback


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def make_cases(rng):
    lat = rng.uniform(42.0, 46.0, 1500)
    lon = rng.uniform(-82.0, -76.0, 1500)
    x = rng.uniform(0.0, 300.0, 1200)
    y = rng.uniform(0.0, 300.0, 1200)
    thresholds = np.linspace(1.0, 75.0, 40)
    r = rng.uniform(0.0, 400.0, 200_000)
    xs = rng.uniform(1e-6, 30.0, 20_000)
    return [
        (
            "haversine_matrix (1500 pts)",
            lambda impl: impl.haversine_matrix(lat, lon),
        ),
        (
            "haversine_to_point (1500 pts x 200)",
            lambda impl: [
                impl.haversine_to_point(float(lat[i]), float(lon[i]), lat, lon)
                for i in range(200)
            ],
        ),
        (
            "pair_counts_within (1200 pts, 40 bands)",
            lambda impl: impl.pair_counts_within(x, y, thresholds),
        ),
        (
            "crs_basis_array (200k radii)",
            lambda impl: impl.crs_basis_array(r, 0.5),
        ),
        (
            "exp1 (20k scalar calls)",
            lambda impl: [impl.exp1(float(v)) for v in xs],
        ),
    ]


def check_agreement(case_fn):
    a = np.asarray(case_fn(_core), dtype=np.float64)
    b = np.asarray(case_fn(_fallback), dtype=np.float64)
    if not np.allclose(a, b, rtol=1e-12, atol=1e-12):
        raise SystemExit("backend results disagree; benchmark aborted")


def run(repeat):
    rng = np.random.default_rng(0)
    cases = make_cases(rng)
    name_w = max(len(name) for name, _ in cases)
    print(f"{'kernel':<{name_w}}  {'cython':>10}  {'numpy':>10}  {'speedup':>8}")
    print("-" * (name_w + 34))
    for name, case in cases:
        check_agreement(case)
        t_core = best_of(lambda: case(_core), repeat)
        t_fallback = best_of(lambda: case(_fallback), repeat)
        print(
            f"{name:<{name_w}}  {t_core * 1e3:>8.2f}ms  {t_fallback * 1e3:>8.2f}ms"
            f"  {t_fallback / t_core:>7.1f}x"
        )


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5, help="best-of repetitions")
    run(parser.parse_args().repeat)
