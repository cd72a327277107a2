"""Compiled versus pure-Python decision-diagram kernel on whole solver runs.

    python3 benchmarks/bench_kernel.py [--reps N]
"""

import argparse
import statistics
import time

from gr1perf.game import compile as compile_game
from gr1perf.gr1solve import solve_gr1
from gr1perf.harness.families import generate_counter_family
from gr1perf.rabinsolve import solve_rabin
from gr1perf.symcore import CompiledKernel, DDManager, PyKernel

WORKLOADS = [
    ("EUN_GOOD", 1000, solve_gr1),
    ("EFP_BAD", 8, solve_gr1),
    ("FPR_GOOD", 200, solve_gr1),
    ("DEADLOCK", 255, solve_rabin),
]


def timed(kernel_cls, variant, n, solve, reps):
    spec = generate_counter_family(n, variant)
    out = []
    for _ in range(reps):
        mgr = DDManager(kernel=kernel_cls(0))
        t0 = time.monotonic_ns()
        solve(compile_game(spec, mgr))
        out.append(time.monotonic_ns() - t0)
    return statistics.median(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=5)
    a = ap.parse_args()
    if CompiledKernel is None:
        raise SystemExit("compiled kernel not built; run pip install --no-build-isolation -e .")
    print(f"{'workload':<16} {'pure ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for variant, n, solve in WORKLOADS:
        py = timed(PyKernel, variant, n, solve, a.reps)
        cy = timed(CompiledKernel, variant, n, solve, a.reps)
        print(f"{variant + '(' + str(n) + ')':<16} {py / 1e6:10.1f} {cy / 1e6:12.1f} {py / cy:8.2f}")


if __name__ == "__main__":
    main()
