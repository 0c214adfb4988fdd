import time

import numpy as np
import pytest

from epdyn.crossval import CvConfig
from epdyn.ep import EpKind, EpSequence
from epdyn.experiment import CellConfig, run_cell
from epdyn.forest import ForestConfig
from epdyn.synth import default_benchmark, generate


def make_seq(frames, kind=EpKind.BEP, id="u0", label="a"):
    return EpSequence(id=id, label=label, kind=kind, frames=np.asarray(frames, dtype=float))


def random_simplex_rows(rng, n, m):
    raw = rng.uniform(0.05, 1.0, size=(n, m))
    return raw / raw.sum(axis=1, keepdims=True)


@pytest.fixture(scope="session")
def benchmark():
    cfg = default_benchmark()
    eep, bep = generate(cfg)
    return cfg, eep, bep


# Frozen evaluation seeds for the synthetic benchmark (see the acceptance
# suite): 10-fold CV seed 7, 100-tree forest seed 13, measured on BEP.
BENCHMARK_CELLS = {
    "dmd": CellConfig(method="dmd", ep="bep", d=(1, 2)),
    "avg": CellConfig(method="avg", ep="bep"),
    "pmeans": CellConfig(method="pmeans", ep="bep", powers=(1, 2)),
    "functionals": CellConfig(method="functionals", ep="bep"),
    "dct": CellConfig(method="dct", ep="bep", k=3),
    "dmd_avg": CellConfig(method="dmd", ep="bep", d=(1, 2), with_avg=True),
}


@pytest.fixture(scope="session")
def benchmark_reports(benchmark):
    cfg, eep, bep = benchmark
    cv = CvConfig(folds=10, seed=7)
    forest = ForestConfig(trees=100, seed=13)
    start = time.perf_counter()
    reports = {
        name: run_cell(cell, eep, bep, cv, forest)[1]
        for name, cell in BENCHMARK_CELLS.items()
    }
    elapsed = time.perf_counter() - start
    return reports, elapsed
