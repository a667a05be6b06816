#!/usr/bin/env python3
"""Benchmark: jitted kernels vs the pure-numpy fallback.

Times the hot suite kernels on identical pre-sampled inputs for both backends
and prints a speedup table.

Usage:
    python benchmarks/bench_backends.py [--trials N] [--dim D] [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from tracelab import matcore, posmap
from tracelab.kernels import load_backend
from tracelab.matcore import EIG_FLOOR
from tracelab.scalarfun import ScalarFunction, tilde


def sample_inputs(trials: int, dim: int, seed: int = 0):
    A1 = np.empty((trials, dim, dim), dtype=np.complex128)
    A2 = np.empty_like(A1)
    B1 = np.empty_like(A1)
    B2 = np.empty_like(A1)
    for i in range(trials):
        rng = matcore.trial_rng(seed, i)
        A1[i] = matcore.random_pd(dim, rng).entries
        A2[i] = matcore.random_pd(dim, rng).entries
        B1[i] = matcore.random_pd(dim, rng).entries
        B2[i] = matcore.random_pd(dim, rng).entries
    rng = np.random.default_rng(seed + 1)
    Kphi = posmap.random_map(dim, dim, 2, rng).kraus
    Kpsi = posmap.random_map(dim, dim, 2, rng).kraus
    return A1, A2, B1, B2, Kphi, Kpsi


def bench_joint(backend, inputs, repeats: int):
    A1, A2, B1, B2, Kphi, Kpsi = inputs
    h = ScalarFunction.log()
    f = ScalarFunction.invpower(1)
    enc_f, enc_h, enc_ht = f.encode(), h.encode(), tilde(h).encode()
    args = (A1, B1, A2, B2, Kphi, Kpsi, enc_f, enc_f, enc_h, enc_ht,
            0, False, False, EIG_FLOOR)
    backend.joint_gaps(*(a[:2] if isinstance(a, np.ndarray) and a.ndim == 3 else a
                         for a in args))  # warmup / compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        gaps, _, status = backend.joint_gaps(*args)
        best = min(best, time.perf_counter() - t0)
    assert not status.any()
    return best, float(gaps.min())


def bench_fn_apply(backend, inputs, repeats: int):
    A1 = inputs[0]
    enc = ScalarFunction.log().encode()
    backend.herm_fn_apply(A1[0], enc, EIG_FLOOR)  # warmup / compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for t in range(A1.shape[0]):
            backend.herm_fn_apply(A1[t], enc, EIG_FLOOR)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--dim", type=int, default=3)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"sampling {args.trials} trials of dim {args.dim} ...")
    inputs = sample_inputs(args.trials, args.dim)

    rows = []
    results = {}
    for name in ("numpy", "numba"):
        try:
            backend = load_backend(name)
        except ImportError:
            print(f"backend {name} unavailable, skipping")
            continue
        t_joint, min_gap = bench_joint(backend, inputs, args.repeats)
        t_apply = bench_fn_apply(backend, inputs, args.repeats)
        results[name] = (t_joint, t_apply)
        rows.append((name, t_joint, t_apply, min_gap))

    print(f"\n{'backend':<8} {'joint_gaps':>12} {'per trial':>12} {'fn_apply':>12} {'min gap':>12}")
    print("-" * 62)
    for name, t_joint, t_apply, min_gap in rows:
        print(f"{name:<8} {t_joint:>10.3f} s {t_joint / args.trials * 1e6:>9.1f} us "
              f"{t_apply:>10.3f} s {min_gap:>12.3e}")
    if len(results) == 2:
        sj = results["numpy"][0] / results["numba"][0]
        sa = results["numpy"][1] / results["numba"][1]
        print(f"\nnumba speedup: {sj:.1f}x on the suite kernel, {sa:.1f}x on functional calculus")


if __name__ == "__main__":
    main()
