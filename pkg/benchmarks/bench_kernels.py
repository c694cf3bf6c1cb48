"""Benchmark the compiled policy-sweep kernel against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]

Workloads are full-table sweeps of randomly generated diagrams at several
policy-count scales; the same arrays feed both backends so the timings are
directly comparable.
"""

import argparse
import time

import numpy as np

from infdiag import plan
from infdiag.kernels import _pykern
from infdiag.randgen import policy_profile_count, random_diagram
from infdiag.solve import _utility_space, prepare

try:
    from infdiag.kernels import _ckern
except ImportError:
    _ckern = None


def workloads(rng, caps):
    for cap in caps:
        best, best_count = None, -1
        for _ in range(400):
            d = random_diagram(rng, n_chance=4, n_decisions=2, policy_cap=cap)
            count = policy_profile_count(d)
            if best_count < count <= cap:
                best, best_count = d, count
        tables = plan.full_tables(_utility_space(prepare(best)))
        yield best_count, tables


def time_backend(backend, tables, repeats):
    weight = np.ascontiguousarray(tables.prob * tables.payoff)
    args = (weight, tables.dvals, tables.sidxs, tables.n_states, tables.n_alts)
    backend.policy_sweep(*args)  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        result = backend.policy_sweep(*args)
    return (time.perf_counter() - start) / repeats, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'profiles':>10} {'configs':>8} {'numpy':>12} {'compiled':>12} {'speedup':>8}")
    for count, tables in workloads(rng, caps=(100, 1000, 20000, 500000)):
        py_t, py_r = time_backend(_pykern, tables, args.repeats)
        if _ckern is None:
            print(f"{count:>10} {len(tables.prob):>8} {py_t * 1e3:>10.2f}ms {'n/a':>12}")
            continue
        cy_t, cy_r = time_backend(_ckern, tables, args.repeats)
        assert abs(py_r[0] - cy_r[0]) < 1e-9 and np.array_equal(py_r[1], cy_r[1])
        print(f"{count:>10} {len(tables.prob):>8} {py_t * 1e3:>10.2f}ms "
              f"{cy_t * 1e3:>10.2f}ms {py_t / cy_t:>7.1f}x")


if __name__ == "__main__":
    main()
