"""Benchmark the compiled kernels against the vectorized fallback.

The ARGCL_KERNEL environment variable is read once at import, so each mode
runs in its own subprocess and reports timings as JSON; the parent prints a
comparison table. Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import argparse
import json
import os
import random
import subprocess
import sys
import time


def build_workloads():
    import numpy as np

    from argcl import (
        Constraint,
        GammaFormula,
        Relation,
        arg_exists,
        relation_properties,
    )
    from argcl.kernels import OP_IMP, OP_MAJ, filter_models, pair_closure, triple_closure

    rng = random.Random(7)
    n_vars = 20
    tables = []
    positions = []
    for _ in range(8):
        rows = [rng.random() < 0.7 for _ in range(8)]
        rows[rng.randrange(8)] = True
        tables.append(np.array(rows, dtype=np.bool_))
        positions.append(tuple(rng.sample(range(n_vars), 3)))

    def filter_large():
        filter_models(n_vars, tables, positions)

    full_mask = (1 << 12) - 1
    members = np.array(
        sorted(rng.sample(range(full_mask + 1), 2000)), dtype=np.int64
    )
    closed = np.ones(full_mask + 1, dtype=np.bool_)

    def closure_pair():
        pair_closure(members, closed, OP_IMP, full_mask)

    trip_members = members[:300]

    def closure_triple():
        triple_closure(trip_members, closed, OP_MAJ)

    ternary = [
        Relation("B", 3, frozenset(t for t in range(8) if bits >> t & 1))
        for bits in range(1, 255)
    ]

    def property_sweep():
        relation_properties.cache_clear()
        for relation in ternary:
            relation_properties(relation)

    or2 = Relation("OR2", 2, frozenset({1, 2, 3}))
    neq = Relation("NEQ", 2, frozenset({1, 2}))
    chain = [
        GammaFormula((Constraint(or2, (f"v{i:02d}", f"v{i + 1:02d}")),))
        for i in range(11)
    ]
    chain.append(GammaFormula((Constraint(neq, ("v00", "v11")),)))
    claim = GammaFormula((Constraint(or2, ("v00", "v11")),))

    def solve_chain():
        arg_exists(chain, claim)

    return [
        ("filter_models: 8 ternary constraints over 20 variables", filter_large),
        ("pair_closure: 2000 members, 12-bit tuples", closure_pair),
        ("triple_closure: 300 members, 12-bit tuples", closure_triple),
        ("relation_properties: all 254 ternary relations", property_sweep),
        ("arg_exists: 12-formula chain over 12 variables", solve_chain),
    ]


def best_of(run, repeats=3):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        run()
        times.append(time.perf_counter() - start)
    return min(times)


def worker():
    from argcl.kernels import kernel_mode

    results = {"mode": kernel_mode(), "timings": {}}
    for name, run in build_workloads():
        run()  # warm up: first numba call includes compilation
        results["timings"][name] = best_of(run)
    print(json.dumps(results))


def measure(mode):
    env = dict(os.environ)
    env["ARGCL_KERNEL"] = mode
    probe = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker"],
        capture_output=True,
        text=True,
        env=env,
    )
    if probe.returncode != 0:
        sys.stderr.write(probe.stderr)
        raise SystemExit(f"{mode} worker failed with code {probe.returncode}")
    return json.loads(probe.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.worker:
        worker()
        return

    numpy_run = measure("numpy")
    try:
        numba_run = measure("numba")
    except SystemExit as exc:
        print(f"numba unavailable ({exc}); numpy timings only")
        for name, seconds in numpy_run["timings"].items():
            print(f"  {name}: {seconds:.4f}s")
        return

    width = max(len(name) for name in numpy_run["timings"])
    print("kernel benchmark, best of 3 after warm-up")
    print(f"{'workload':<{width}}  {'numba':>9}  {'numpy':>9}  {'speedup':>8}")
    for name, numpy_s in numpy_run["timings"].items():
        numba_s = numba_run["timings"][name]
        speedup = numpy_s / numba_s if numba_s > 0 else float("inf")
        print(f"{name:<{width}}  {numba_s:>8.4f}s  {numpy_s:>8.4f}s  {speedup:>7.1f}x")


if __name__ == "__main__":
    main()
