#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernels on the hot operations.

Usage:
    python3 benchmarks/compare_kernels.py [--keys N] [--nodes A] [--repeat R]

Both implementations produce bit-identical results (the test suite enforces
it); this script only measures the speed gap so regressions in either lane
are visible. Results are wallclock and machine-dependent by nature.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dxhash._kernels import _python

try:
    from dxhash._kernels import _native
except ImportError:
    _native = None


def bench(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--keys", type=int, default=1_000_000)
    parser.add_argument("--nodes", type=int, default=1024)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(42)
    seeds = rng.integers(0, 2**64, size=args.keys, dtype=np.uint64)
    vals = rng.integers(0, 2**64, size=args.keys, dtype=np.uint64)

    half = np.zeros(args.nodes, dtype=np.uint8)
    half[rng.choice(args.nodes, size=args.nodes // 2, replace=False)] = 1
    tenth = np.zeros(args.nodes, dtype=np.uint8)
    tenth[rng.choice(args.nodes, size=max(args.nodes // 10, 1), replace=False)] = 1

    codes = rng.integers(1, 2**32, size=args.nodes, dtype=np.uint32)
    mag_nodes = 100
    offsets = rng.integers(0, 99991, size=mag_nodes, dtype=np.int64)
    skips = rng.integers(1, 99991, size=mag_nodes, dtype=np.int64)

    cap = 2 * args.nodes
    cases = [
        ("digest8_vec", lambda m: m.digest8_vec(vals)),
        ("mix64_vec", lambda m: m.mix64_vec(vals.copy())),
        ("lookup 50% failed", lambda m: m.lookup_bulk(seeds, half, args.nodes, cap)),
        ("lookup 90% failed", lambda m: m.lookup_bulk(seeds, tenth, args.nodes, cap)),
        ("weighted lookup", lambda m: m.lookup_weighted_bulk(seeds, codes, cap)),
        ("jump n=1000", lambda m: m.jump_bulk(seeds, 1000)),
        ("maglev fill m=99991", lambda m: m.maglev_fill(offsets, skips, 99991)),
    ]

    print(f"keys={args.keys:,} nodes={args.nodes} repeat={args.repeat} (best-of)")
    header = f"{'operation':<22}{'python':>12}{'native':>12}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, call in cases:
        t_py = bench(call, _python, repeat=args.repeat)
        if _native is None:
            print(f"{name:<22}{t_py:>10.3f}s{'-':>12}{'-':>9}")
            continue
        t_nat = bench(call, _native, repeat=args.repeat)
        print(f"{name:<22}{t_py:>10.3f}s{t_nat:>10.3f}s{t_py / t_nat:>8.1f}x")
    if _native is None:
        print("\ncompiled kernels not built; showing the pure-Python lane only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
