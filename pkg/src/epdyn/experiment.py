"""Experiment grid runner: method x parameters x EP-type cells, evaluated by CV.

A grid config (JSON) expands into cells; each cell summarizes every
utterance with one method configuration on one EP selection (eep, bep, or
eep(+)bep), optionally concatenating the plain average, then cross-validates
the forest and reports WA/UA, per-fold metrics, the confusion matrix, and
any utterances skipped because they were too short for the requested
stacking order.

Config shape:

    {
      "cv":     {"folds": 10, "seed": 1, "stratified": true},
      "forest": {"trees": 100, "seed": 2},
      "grid": [
        {"method": "dmd",    "d": [[1], [2], [1, 2]],
         "ep": ["eep", "bep"], "with_avg": [false, true]},
        {"method": "pmeans", "powers": [[1], [1, 2]], "ep": ["eep"]},
        {"method": "dct",    "k": [1, 2, 3],          "ep": ["bep"]},
        {"method": "avg",        "ep": ["eep+bep"]},
        {"method": "functionals", "ep": ["eep"]}
      ]
    }

List-valued parameter axes cross-multiply with the "ep" and "with_avg" axes.
Cells are independent; with jobs > 1 they run in a process pool, and per-cell
derived seeds keep every schedule byte-identical to the sequential run.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from epdyn import dmd, summarizers
from epdyn.crossval import CvConfig, EvalReport, cross_validate
from epdyn.ep import Dataset, EpSequence, pair_eep_bep
from epdyn.errors import ConfigError
from epdyn.forest import ForestConfig
from epdyn.summarizers import CONCAT_JOINER

EP_CHOICES = ("eep", "bep", "eep+bep")
METHOD_CHOICES = ("avg", "pmeans", "functionals", "dct", "dmd")


@dataclass(frozen=True)
class CellConfig:
    method: str
    ep: str
    with_avg: bool = False
    d: tuple[int, ...] | None = None
    powers: tuple[int, ...] | None = None
    k: int | None = None

    def __post_init__(self):
        if self.method not in METHOD_CHOICES:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.ep not in EP_CHOICES:
            raise ConfigError(f"unknown EP selection {self.ep!r}")
        if self.method == "dmd" and not self.d:
            raise ConfigError("dmd cells need a 'd' order list")
        if self.method == "pmeans" and not self.powers:
            raise ConfigError("pmeans cells need a 'powers' list")
        if self.method == "dct" and not self.k:
            raise ConfigError("dct cells need 'k'")

    @property
    def method_descriptor(self) -> str:
        if self.method == "dmd":
            base = dmd.method_descriptor(self.d)
        elif self.method == "pmeans":
            base = "pmeans:p=" + ",".join(str(p) for p in self.powers)
        elif self.method == "dct":
            base = f"dct:k={self.k}"
        else:
            base = self.method
        return base + (CONCAT_JOINER + "avg" if self.with_avg else "")

    @property
    def label(self) -> str:
        ep = self.ep.replace("+", CONCAT_JOINER)
        return f"{self.method_descriptor} & {ep}"


@dataclass
class ExperimentConfig:
    cv: CvConfig
    forest: ForestConfig
    cells: list[CellConfig] = field(default_factory=list)

    def __post_init__(self):
        if not self.cells:
            raise ConfigError("experiment grid is empty")


def _as_variants(value, name: str) -> list:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"grid entry field {name!r} must be a nonempty list")
    return value


def _expand_entry(entry: dict) -> list[CellConfig]:
    method = entry.get("method")
    if method not in METHOD_CHOICES:
        raise ConfigError(f"grid entry has unknown method {method!r}")
    eps = [str(e) for e in _as_variants(entry.get("ep", ["eep"]), "ep")]
    with_avgs = [bool(w) for w in _as_variants(entry.get("with_avg", [False]), "with_avg")]
    if method == "dmd":
        param_sets = [
            {"d": tuple(int(x) for x in ds)} for ds in _as_variants(entry.get("d"), "d")
        ]
    elif method == "pmeans":
        param_sets = [
            {"powers": tuple(int(x) for x in ps)}
            for ps in _as_variants(entry.get("powers"), "powers")
        ]
    elif method == "dct":
        param_sets = [{"k": int(k)} for k in _as_variants(entry.get("k"), "k")]
    else:
        param_sets = [{}]
    return [
        CellConfig(method=method, ep=ep, with_avg=wa, **params)
        for params in param_sets
        for ep in eps
        for wa in with_avgs
    ]


def load_experiment_config(source, default_seed: int = 0) -> ExperimentConfig:
    """Build an ExperimentConfig from a dict or a JSON file path."""
    if isinstance(source, dict):
        raw = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    cv_raw = dict(raw.get("cv", {}))
    cv_raw.setdefault("seed", default_seed)
    forest_raw = dict(raw.get("forest", {}))
    forest_raw.setdefault("seed", default_seed)
    try:
        cv = CvConfig(**cv_raw)
        forest = ForestConfig(**forest_raw)
    except TypeError as exc:
        raise ConfigError(f"bad cv/forest config: {exc}") from exc
    grid = raw.get("grid")
    if not isinstance(grid, list) or not grid:
        raise ConfigError("experiment config needs a nonempty 'grid' list")
    cells = [cell for entry in grid for cell in _expand_entry(entry)]
    return ExperimentConfig(cv=cv, forest=forest, cells=cells)


def _base_representation(cell: CellConfig, seq: EpSequence):
    if cell.method == "avg":
        return summarizers.average(seq)
    if cell.method == "pmeans":
        return summarizers.p_means(seq, cell.powers)
    if cell.method == "functionals":
        return summarizers.functionals(seq)
    if cell.method == "dct":
        return summarizers.dct_summary(seq, cell.k)
    return dmd.representation(seq, cell.d)


def cell_representations(cell: CellConfig, eep: Dataset, bep: Dataset):
    """Per-utterance representations for one cell, plus the skip list.

    Under DMD, utterances whose frame count N satisfies N <= max(d) on any
    selected EP kind are excluded and reported in the skip list.
    """
    if cell.ep == "eep":
        groups = [(seq,) for seq in eep.sequences]
    elif cell.ep == "bep":
        groups = [(seq,) for seq in bep.sequences]
    else:
        groups = pair_eep_bep(eep, bep)
    reps, skipped = [], []
    max_d = max(cell.d) if cell.method == "dmd" else 0
    for group in groups:
        shortest = min(seq.n_frames for seq in group)
        if cell.method == "dmd" and shortest <= max_d:
            skipped.append(
                (group[0].id, f"N={shortest} too short for order d={max_d}")
            )
            continue
        parts = [_base_representation(cell, seq) for seq in group]
        if cell.with_avg:
            parts.extend(summarizers.average(seq) for seq in group)
        reps.append(parts[0] if len(parts) == 1 else summarizers.concat(parts))
    return reps, skipped


def run_cell(
    cell: CellConfig, eep: Dataset, bep: Dataset, cv: CvConfig, forest: ForestConfig
) -> tuple[str, EvalReport]:
    primary = bep if cell.ep == "bep" else eep
    class_set = list(primary.class_set)
    reps, skipped = cell_representations(cell, eep, bep)
    if not reps:
        raise ConfigError(f"cell {cell.label!r}: every utterance was skipped")
    sizes = {rep.values.size for rep in reps}
    if len(sizes) != 1:
        raise ConfigError(f"cell {cell.label!r}: inconsistent representation lengths {sorted(sizes)}")
    index = {label: i for i, label in enumerate(class_set)}
    x = np.vstack([rep.values for rep in reps])
    y = np.array([index[rep.label] for rep in reps], dtype=np.int64)
    report = cross_validate(x, y, class_set, cv, forest, skipped=skipped)
    return cell.label, report


def _run_cell_args(args):
    return run_cell(*args)


def run_experiment(
    config: ExperimentConfig, eep: Dataset, bep: Dataset, jobs: int = 1
) -> list[tuple[str, EvalReport]]:
    """Evaluate every grid cell; cells run in parallel when jobs > 1.

    Results are ordered like config.cells and are identical for any jobs
    value (cells are pure functions of their inputs and derived seeds).
    """
    tasks = [(cell, eep, bep, config.cv, config.forest) for cell in config.cells]
    if jobs <= 1 or len(tasks) <= 1:
        return [run_cell(*task) for task in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(_run_cell_args, tasks))


def report_to_dict(config: ExperimentConfig, results) -> dict:
    cells = []
    for cell, (label, report) in zip(config.cells, results):
        cells.append(
            {
                "label": label,
                "method": cell.method_descriptor,
                "ep": cell.ep,
                "wa": report.wa,
                "ua": report.ua,
                "n_used": report.n_used,
                "per_fold": [{"wa": wa, "ua": ua} for wa, ua in report.per_fold],
                "class_set": report.class_set,
                "confusion": report.confusion.tolist(),
                "skipped": [{"id": i, "reason": r} for i, r in report.skipped],
            }
        )
    return {"cells": cells}


def render_table(report: dict) -> str:
    """Plain-text table of one row per cell, accuracies in percent."""
    header = ("method", "ep", "WA", "UA", "n", "skipped")
    rows = [header]
    for cell in report["cells"]:
        rows.append(
            (
                cell["method"],
                cell["ep"].replace("+", CONCAT_JOINER),
                f"{100.0 * cell['wa']:.2f}",
                f"{100.0 * cell['ua']:.2f}",
                str(cell["n_used"]),
                str(len(cell["skipped"])),
            )
        )
    widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append(
            "  ".join(
                cell.ljust(widths[c]) if c < 2 else cell.rjust(widths[c])
                for c, cell in enumerate(row)
            ).rstrip()
        )
        if i == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def confusion_csv(report: dict) -> str:
    """Long-format CSV of every cell's confusion matrix."""
    lines = ["cell,true,pred,count"]
    for cell in report["cells"]:
        labels = cell["class_set"]
        for i, row in enumerate(cell["confusion"]):
            for j, count in enumerate(row):
                lines.append(f"{_csv_field(cell['label'])},{_csv_field(labels[i])},{_csv_field(labels[j])},{count}")
    return "\n".join(lines) + "\n"


def _csv_field(value: str) -> str:
    if any(ch in value for ch in ",\"\n"):
        return '"' + value.replace('"', '""') + '"'
    return value
