#!/usr/bin/env python3
"""Benchmark the compiled split kernel against the numpy fallback.

Times the raw kernel on synthetic node blocks, then an end-to-end forest
fit on benchmark-sized feature matrices, with each backend. Run:

    python benchmarks/bench_split_kernel.py
"""

import time

import numpy as np

from epdyn.forest import ForestConfig, fit_forest
from epdyn.forest import _split_numpy, backend


def kernel_impls():
    impls = {"python": _split_numpy.best_split_gathered}
    try:
        from epdyn.forest import _split_fast

        impls["compiled"] = _split_fast.best_split_gathered
    except ImportError:
        pass
    return impls


def node_block(rng, n, k, n_classes):
    values = np.ascontiguousarray(rng.standard_normal((n, k)))
    labels = rng.integers(0, n_classes, n).astype(np.int64)
    orders = np.ascontiguousarray(np.argsort(values, axis=0), dtype=np.int64)
    return values, orders, labels


def bench_kernel(repeats=200):
    rng = np.random.default_rng(0)
    impls = kernel_impls()
    print("split kernel, per-call microseconds (lower is better)")
    print(f"  {'node n':>7}  {'feats':>5}" + "".join(f"  {name:>10}" for name in impls))
    for n in (50, 200, 800):
        for k in (3, 6):
            args = node_block(rng, n, k, 4)
            row = f"  {n:>7}  {k:>5}"
            reference = None
            for name, impl in impls.items():
                impl(*args, 4, 1)  # warmup
                start = time.perf_counter()
                for _ in range(repeats):
                    result = impl(*args, 4, 1)
                per_call = (time.perf_counter() - start) / repeats
                row += f"  {per_call * 1e6:>10.1f}"
                if reference is None:
                    reference = result
                else:
                    assert result == reference, "backends disagree"
            print(row)


def bench_forest():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((360, 36))
    y = rng.integers(0, 4, 360).astype(np.int64)
    x[np.arange(360), y] += 1.5  # give the trees something to find
    cfg = ForestConfig(trees=100, seed=7)
    print("\nforest fit, 360x36 features, 4 classes, 100 trees")
    previous = backend.active_backend()
    try:
        predictions = {}
        for name in backend.available_backends():
            backend.set_backend(name)
            start = time.perf_counter()
            model = fit_forest(x, y, 4, cfg)
            elapsed = time.perf_counter() - start
            predictions[name] = model.predict(x)
            print(f"  {name:>10}: {elapsed:.3f}s")
        values = list(predictions.values())
        if len(values) == 2:
            same = np.array_equal(values[0], values[1])
            print(f"  predictions identical across backends: {same}")
            assert same
    finally:
        backend.set_backend(previous)


if __name__ == "__main__":
    print(f"active backend at import: {backend.active_backend()}")
    bench_kernel()
    bench_forest()
