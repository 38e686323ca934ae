#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the raw hot kernels on octonion-sized (8x8) data, then an
end-to-end octonion triality solve with each implementation swapped in.

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from hurwitz import _kernels
from hurwitz._kernels import pure

try:
    from hurwitz._kernels import _fast
except ImportError:
    _fast = None


def bench(fn, args, repeats, inner=200):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def bench_kernels(repeats):
    from hurwitz.algebra import euclidean_octonions

    O = euclidean_octonions()
    coef = O.coef_f
    rng = np.random.default_rng(0)
    x, y = rng.standard_normal(8), rng.standard_normal(8)
    X, Y = rng.standard_normal((512, 8)), rng.standard_normal((512, 8))
    phi = rng.standard_normal((8, 8))
    phi1 = rng.standard_normal((8, 8))
    phi2 = rng.standard_normal((8, 8))
    m = rng.standard_normal((8, 8))
    S = m @ m.T

    cases = [
        ("mul (8)", "mul", (coef, x, y)),
        ("mul_many (512x8)", "mul_many", (coef, X, Y)),
        ("left_matrix (8)", "left_matrix", (coef, x)),
        ("product_table (8^3)", "product_table", (coef, phi1, phi2)),
        ("triality_residual_max", "triality_residual_max", (coef, phi, phi1, phi2)),
        ("jacobi_eigh (8x8)", "jacobi_eigh", (S,)),
    ]
    rows = []
    for label, name, args in cases:
        t_pure = bench(getattr(pure, name), args, repeats)
        if _fast is not None:
            t_fast = bench(getattr(_fast, name), args, repeats)
            rows.append((label, t_pure, t_fast))
        else:
            rows.append((label, t_pure, None))
    return rows


def swap_kernels(impl):
    names = [
        "mul",
        "mul_many",
        "left_matrix",
        "right_matrix",
        "product_table",
        "triality_target",
        "triality_residual_max",
        "jacobi_eigh",
    ]
    saved = {n: getattr(_kernels, n) for n in names}
    for n in names:
        setattr(_kernels, n, getattr(impl, n))
    return saved


def restore_kernels(saved):
    for n, fn in saved.items():
        setattr(_kernels, n, fn)


def bench_triality(repeats):
    from hurwitz.algebra import euclidean_octonions
    from hurwitz.triality import (
        compose_triples,
        conjugation_triple,
        triality_components,
    )

    O = euclidean_octonions()
    rng = np.random.default_rng(1)
    phis = []
    for _ in range(10):
        a = O.random_element(rng, unit=True)
        b = O.random_element(rng, unit=True)
        phis.append(compose_triples(conjugation_triple(a), conjugation_triple(b)).phi)

    def run_all():
        for k, phi in enumerate(phis):
            triality_components(phi, seed=k, restarts=16)

    results = {}
    for label, impl in (("pure", pure), ("cython", _fast)):
        if impl is None:
            continue
        saved = swap_kernels(impl)
        try:
            best = float("inf")
            for _ in range(repeats):
                t0 = time.perf_counter()
                run_all()
                best = min(best, time.perf_counter() - t0)
            results[label] = best / len(phis)
        finally:
            restore_kernels(saved)
    return results


def fmt(seconds):
    if seconds is None:
        return "n/a"
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.2f} us"
    return f"{seconds * 1e3:8.3f} ms"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"active kernel backend: {_kernels.backend_name()}")
    if _fast is None:
        print("compiled kernels not built; only the pure fallback is timed\n")

    print(f"{'kernel':<24}{'pure':>14}{'cython':>14}{'speedup':>10}")
    for label, t_pure, t_fast in bench_kernels(args.repeats):
        speed = f"{t_pure / t_fast:8.1f}x" if t_fast else "     n/a"
        print(f"{label:<24}{fmt(t_pure):>14}{fmt(t_fast):>14}{speed:>10}")

    print("\nend-to-end octonion triality solve (avg per solve):")
    for label, t in bench_triality(max(2, args.repeats // 2)).items():
        print(f"  {label:<8}{fmt(t)}")


if __name__ == "__main__":
    main()
