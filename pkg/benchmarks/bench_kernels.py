#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure-Python fallback.

Times the three hot kernels (Jacobi eigendecomposition, pivoted LDL^T
determinant sign, divided-sum fill) on random symmetric matrices, plus one
end-to-end classification run per backend. Invoke from the repository root:

    python benchmarks/bench_kernels.py [--sizes 4,8,16,32] [--repeats 300]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from antiloewner import _kernels
from antiloewner import analysis as an
from antiloewner.functions import Power


def _time(fn, repeats):
    best = float("inf")
    for _ in range(3):
        start = time.perf_counter()
        for _ in range(repeats):
            fn()
        best = min(best, (time.perf_counter() - start) / repeats)
    return best


def bench_kernels(sizes, repeats, seed):
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        a = rng.standard_normal((n, n))
        a = 0.5 * (a + a.T)
        x = np.sort(rng.uniform(0.1, 10.0, n))
        g = rng.uniform(0.1, 10.0, n)
        reps = max(1, repeats // n)
        for name in _kernels.available_backends():
            be = _kernels.get_backend(name)
            rows.append((name, n,
                         _time(lambda: be.jacobi_eigh(a, False), reps),
                         _time(lambda: be.ldlt_sign_logdet(a), reps),
                         _time(lambda: be.fill_anti_loewner(x, g), reps)))
    return rows


def bench_end_to_end(trials, seed):
    cfg = an.TrialConfig(trials=trials, seed=seed)
    results = {}
    original = _kernels.backend_name()
    try:
        for name in _kernels.available_backends():
            _kernels.set_backend(name)
            start = time.perf_counter()
            rep = an.classify_anti_loewner(Power(0.5), 6, cfg)
            results[name] = (time.perf_counter() - start, rep.outcome)
    finally:
        _kernels.set_backend(original)
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="4,8,16,32")
    parser.add_argument("--repeats", type=int, default=2000)
    parser.add_argument("--trials", type=int, default=100,
                        help="trials for the end-to-end classification run")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = _kernels.available_backends()
    print(f"backends: {', '.join(backends)} (active: {_kernels.backend_name()})")
    if "native" not in backends:
        print("note: compiled extension not built; timing the fallback only")

    rows = bench_kernels(sizes, args.repeats, args.seed)
    print(f"\n{'backend':>8} {'n':>4} {'eigh':>12} {'ldlt':>12} {'fill':>12}")
    for name, n, t_eig, t_ldlt, t_fill in rows:
        print(f"{name:>8} {n:>4} {t_eig * 1e6:>10.1f}us {t_ldlt * 1e6:>10.1f}us "
              f"{t_fill * 1e6:>10.1f}us")

    if len(backends) == 2:
        print("\nspeedup (pure / native):")
        by_key = {(name, n): (t1, t2, t3) for name, n, t1, t2, t3 in rows}
        for n in sizes:
            pn, pp = by_key[("native", n)], by_key[("pure", n)]
            print(f"  n={n:>3}: eigh {pp[0] / pn[0]:>6.1f}x  ldlt {pp[1] / pn[1]:>6.1f}x  "
                  f"fill {pp[2] / pn[2]:>6.1f}x")

    print(f"\nend-to-end: classify order-6 divided-sum positivity, "
          f"{args.trials} trials")
    for name, (elapsed, outcome) in bench_end_to_end(args.trials, args.seed).items():
        print(f"  {name:>8}: {elapsed:.3f}s ({outcome})")


if __name__ == "__main__":
    main()
