#!/usr/bin/env python3
"""Benchmark the closure-engine backends against each other.

Two workloads:
  * micro: repeated close_level calls on a captured set of inputs;
  * macro: a full weak-plan search on the shipped smart-home domain.

Run from the repository root:

    python3 benchmarks/bench_engine.py [--repeat N] [--horizon H]
"""

import argparse
import importlib.resources
import statistics
import time

from epiplan import engine
from epiplan.engine import _engine_py
from epiplan.kernel import init_tree
from epiplan.language import ground, parse
from epiplan.planner import SearchConfig, find_weak_plan

try:
    from epiplan.engine import _engine_c
except ImportError:
    _engine_c = None


def load_tree():
    text = (
        importlib.resources.files("epiplan.data")
        .joinpath("baall.epi")
        .read_text(encoding="utf-8")
    )
    dom, prob = parse(text)
    return init_tree(ground(dom, prob))


def capture_inputs(tree, horizon):
    """Record every close_level invocation of one plan search."""
    captured = []
    original = engine.close_level

    def recorder(*args):
        captured.append(args)
        return original(*args)

    engine.close_level = recorder
    try:
        find_weak_plan(tree, horizon, SearchConfig())
    finally:
        engine.close_level = original
    return captured


def bench_micro(backend, inputs, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in inputs:
            try:
                backend.close_level(*args)
            except _engine_py.Conflict:
                pass
        times.append(time.perf_counter() - t0)
    return min(times), statistics.mean(times)


def bench_macro(backend, tree, horizon, repeat):
    times = []
    original = engine.close_level
    engine.close_level = backend.close_level
    try:
        for _ in range(repeat):
            t0 = time.perf_counter()
            plan = find_weak_plan(tree, horizon, SearchConfig())
            times.append(time.perf_counter() - t0)
            assert plan is not None, "benchmark domain became unsolvable"
    finally:
        engine.close_level = original
    return min(times), statistics.mean(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--horizon", type=int, default=7)
    args = ap.parse_args()

    backends = [("python", _engine_py)]
    if _engine_c is not None:
        backends.append(("cython", _engine_c))
    else:
        print("note: compiled backend not built, benchmarking python only")

    tree = load_tree()
    inputs = capture_inputs(tree, args.horizon)
    print(f"captured {len(inputs)} close_level calls "
          f"(search horizon {args.horizon})\n")

    print(f"{'workload':<10} {'backend':<8} {'best':>10} {'mean':>10}")
    results = {}
    for name, backend in backends:
        best, mean = bench_micro(backend, inputs, args.repeat)
        results[("micro", name)] = best
        print(f"{'micro':<10} {name:<8} {best:>9.3f}s {mean:>9.3f}s")
    for name, backend in backends:
        best, mean = bench_macro(backend, tree, args.horizon, args.repeat)
        results[("macro", name)] = best
        print(f"{'macro':<10} {name:<8} {best:>9.3f}s {mean:>9.3f}s")

    if _engine_c is not None:
        for workload in ("micro", "macro"):
            py = results[(workload, "python")]
            cy = results[(workload, "cython")]
            print(f"\n{workload}: cython is {py / cy:.1f}x "
                  f"{'faster' if cy < py else 'slower'} than python")


if __name__ == "__main__":
    main()
