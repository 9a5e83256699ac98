#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure numpy fallback.

Workloads mirror the hot paths: per-entry path-basis assembly and a full
variance map.  The jitted backend is warmed (compiled) before timing.

    python3 benchmarks/bench_kernels.py --m 50 --n 50 --k 200 --repeat 3
"""

import argparse
import time

import numpy as np

import r1complete as r1
from r1complete import kernels


def _connected_mask(rng, m, n, k):
    order = list(rng.permutation(m + n))
    blues = [v for v in order if v < m]
    reds = [v for v in order if v >= m]
    known = {(blues[0], reds[0] - m)}
    placed_b, placed_r = [blues[0]], [reds[0]]
    for v in order:
        if v in (blues[0], reds[0]):
            continue
        if v < m:
            known.add((v, placed_r[int(rng.integers(len(placed_r)))] - m))
            placed_b.append(v)
        else:
            known.add((placed_b[int(rng.integers(len(placed_b)))], v - m))
            placed_r.append(v)
    while len(known) < k:
        known.add((int(rng.integers(m)), int(rng.integers(n))))
    return r1.Mask(m, n, tuple(known))


def bench_basis(graph, entries, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        for entry in entries:
            r1.path_space_basis(graph, entry)
        best = min(best, time.perf_counter() - start)
    return best


def bench_variance_map(graph, noise, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        r1.variance_map(graph, noise, jobs=1)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=50)
    parser.add_argument("--n", type=int, default=50)
    parser.add_argument("--k", type=int, default=200)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    mask = _connected_mask(rng, args.m, args.n, args.k)
    noise = r1.NoiseSpec.constant(1.0)
    entries = [(int(rng.integers(args.m)), int(rng.integers(args.n)))
               for _ in range(200)]

    results = {}
    for backend in ("numba", "numpy"):
        try:
            kernels.set_backend(backend)
        except ImportError:
            print(f"{backend}: unavailable, skipped")
            continue
        graph = r1.build_graph(mask)
        r1.path_space_basis(graph, entries[0])   # warm (JIT compile)
        r1.variance_bound(graph, entries[0], noise)
        results[backend] = {
            "basis_200_entries": bench_basis(graph, entries, args.repeat),
            "variance_map": bench_variance_map(graph, noise, args.repeat),
        }

    print(f"\nmask {args.m}x{args.n}, {args.k} observed entries "
          f"(best of {args.repeat})")
    print(f"{'workload':<24}" + "".join(f"{b:>12}" for b in results))
    for workload in ("basis_200_entries", "variance_map"):
        row = f"{workload:<24}"
        for backend in results:
            row += f"{results[backend][workload]:>11.3f}s"
        print(row)
    if len(results) == 2:
        for workload in ("basis_200_entries", "variance_map"):
            ratio = results["numpy"][workload] / results["numba"][workload]
            print(f"{workload}: numba is {ratio:.1f}x faster")


if __name__ == "__main__":
    main()
