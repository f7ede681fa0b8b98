#!/usr/bin/env python3
"""Compare the compiled kernels against the NumPy fallback.

Times the three kernel entry points (product, cubic power, stage solve) and
an end-to-end composition run with each backend swapped in.  Run from the
repo root after building the extension:

    python3 setup.py build_ext --inplace
    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

import kdvgalerkin._backend as backend
from kdvgalerkin import _fallback
from kdvgalerkin import EquationSpec, SpectralField, StepperConfig, evolve, scheme_yoshida

try:
    from kdvgalerkin import _kernels
except ImportError:
    _kernels = None


def timeit(fn, min_time=0.2):
    fn()  # warm up
    reps, elapsed = 0, 0.0
    t0 = time.perf_counter()
    while elapsed < min_time:
        fn()
        reps += 1
        elapsed = time.perf_counter() - t0
    return elapsed / reps


def rand_coeffs(n, rng):
    pos = (rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1))
    pos *= 0.5 / (1.0 + np.arange(n + 1)) ** 2
    pos[0] = pos[0].real
    return np.concatenate([np.conj(pos[1:][::-1]), pos])


def row(label, t_fallback, t_compiled):
    if t_compiled is None:
        print(f"{label:<34} {t_fallback * 1e6:>10.1f}          n/a")
    else:
        print(f"{label:<34} {t_fallback * 1e6:>10.1f} {t_compiled * 1e6:>12.1f} "
              f"{t_fallback / t_compiled:>8.1f}x")


def bench_kernels():
    rng = np.random.default_rng(7)
    print(f"{'kernel':<34} {'python us':>10} {'compiled us':>12} {'speedup':>8}")
    for n in (16, 32, 64, 128):
        a, b = rand_coeffs(n, rng), rand_coeffs(n, rng)
        tf = timeit(lambda: _fallback.product_truncated(a, b, n))
        tc = timeit(lambda: _kernels.product_truncated(a, b, n)) if _kernels else None
        row(f"product N={n}", tf, tc)
    for n in (32, 64):
        a = rand_coeffs(n, rng)
        tf = timeit(lambda: _fallback.power_truncated(a, 3, n))
        tc = timeit(lambda: _kernels.power_truncated(a, 3, n)) if _kernels else None
        row(f"cubic power N={n}", tf, tc)
    n = 64
    y = rand_coeffs(n, rng)
    lam = 1j * np.arange(-n, n + 1, dtype=float) ** 3
    args = (y, lam, 1.35e-3, 1, 1e-13, 100, False)
    tf = timeit(lambda: _fallback.stage_solve(*args))
    tc = timeit(lambda: _kernels.stage_solve(*args)) if _kernels else None
    row(f"stage solve N={n} (KdV)", tf, tc)


def bench_end_to_end():
    u0 = SpectralField.from_modes(64, {1: 0.5})
    spec = EquationSpec.kdv()
    cfg = StepperConfig(k=1e-3, fp_tol=1e-13)

    def run():
        evolve(u0, 0.1, scheme_yoshida(4), spec, cfg)

    original = backend.stage_solve
    results = {}
    try:
        for name, mod in (("python", _fallback), ("compiled", _kernels)):
            if mod is None:
                continue
            backend.stage_solve = mod.stage_solve
            t0 = time.perf_counter()
            run()
            results[name] = time.perf_counter() - t0
    finally:
        backend.stage_solve = original

    print()
    print("end-to-end: 100 yoshida4 steps, KdV, N=64, k=1e-3")
    for name, t in results.items():
        print(f"  {name:<10} {t:.3f}s")
    if len(results) == 2:
        print(f"  speedup    {results['python'] / results['compiled']:.1f}x")


if __name__ == "__main__":
    print(f"active backend: {backend.BACKEND_NAME}")
    if _kernels is None:
        print("compiled kernels not built; showing fallback timings only")
    print()
    bench_kernels()
    bench_end_to_end()
