"""Benchmark the Monte Carlo kernels: compiled extension vs NumPy fallback.

Usage: python benchmarks/bench_kernels.py [ROUNDS]
"""
import math
import sys
import time

from hyperqkd.kernels import BACKEND, available_backends
from hyperqkd.protocol import RunConfig, run_protocol


def time_run(config, kernel_name, repeats=3):
    best = math.inf
    stats = None
    for _ in range(repeats):
        start = time.perf_counter()
        stats = run_protocol(config, kernel=kernel_name)
        best = min(best, time.perf_counter() - start)
    return best, stats


def main():
    rounds = int(sys.argv[1]) if len(sys.argv) > 1 else 2_000_000
    config = RunConfig.from_values(
        n_rounds=rounds, seed=1,
        beta=(math.sqrt(0.85),) * 3,
        theta=(math.asin(math.sqrt(0.015)),) * 3)
    print(f"rounds: {rounds}   default backend: {BACKEND}")
    results = {}
    for name in sorted(available_backends()):
        elapsed, stats = time_run(config, name)
        results[name] = (elapsed, stats)
        print(f"  {name:<8}  {elapsed:8.3f} s   "
              f"{rounds / elapsed / 1e6:6.2f} Mrounds/s")
    if len(results) == 2:
        py_time = results["python"][0]
        c_time = results["compiled"][0]
        print(f"  speedup: {py_time / c_time:.2f}x")
        assert results["python"][1] == results["compiled"][1], \
            "kernels disagree on identical inputs"
        print("  counts: identical across backends")


if __name__ == "__main__":
    main()
