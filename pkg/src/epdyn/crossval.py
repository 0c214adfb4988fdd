"""Cross-validated classification harness: folds, metrics, reports.

Folds are seeded and stratified by default: within each class (in class-set
order) the members are shuffled and dealt round-robin, so per-class counts
across folds differ by at most one and the folds partition the dataset.

Metrics follow the usual two accuracies: WA is the overall fraction correct
(trace over total) and UA is the mean per-class recall over classes that
have at least one instance. On a class-balanced confusion matrix the two
coincide.
"""

from dataclasses import dataclass, field

import numpy as np

from epdyn.ep import Dataset
from epdyn.errors import ConfigError, ValidationError
from epdyn.forest import ForestConfig, fit_forest


@dataclass
class CvConfig:
    folds: int = 10
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if self.folds < 2:
            raise ConfigError(f"cross-validation needs folds >= 2, got {self.folds}")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")


@dataclass
class EvalReport:
    class_set: list[str]
    confusion: np.ndarray  # (K, K) int64, rows = true class
    wa: float
    ua: float
    per_fold: list[tuple[float, float]]  # (wa, ua) per fold
    skipped: list[tuple[str, str]] = field(default_factory=list)  # (id, reason)

    @property
    def n_used(self) -> int:
        return int(self.confusion.sum())


def _fold_indices(y: np.ndarray, cfg: CvConfig, n_classes: int) -> list[np.ndarray]:
    """Test-fold index arrays; together they partition range(len(y))."""
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed,)))
    folds: list[list[int]] = [[] for _ in range(cfg.folds)]
    if cfg.stratified:
        for c in range(n_classes):
            members = np.flatnonzero(y == c)
            if members.size and members.size < cfg.folds:
                raise ConfigError(
                    f"class index {c} has {members.size} instance(s); "
                    f"stratified {cfg.folds}-fold CV needs at least {cfg.folds}"
                )
            members = rng.permutation(members)
            for position, index in enumerate(members):
                folds[(position + c) % cfg.folds].append(int(index))
    else:
        for position, index in enumerate(rng.permutation(y.size)):
            folds[position % cfg.folds].append(int(index))
    return [np.array(sorted(fold), dtype=np.int64) for fold in folds]


def stratified_folds(dataset: Dataset, cfg: CvConfig) -> list[tuple[list[str], list[str]]]:
    """(train ids, test ids) per fold; deterministic for a given seed."""
    ids = [seq.id for seq in dataset.sequences]
    index = {label: i for i, label in enumerate(dataset.class_set)}
    y = np.array([index[seq.label] for seq in dataset.sequences], dtype=np.int64)
    out = []
    for test in _fold_indices(y, cfg, len(dataset.class_set)):
        test_set = set(test.tolist())
        train_ids = [ids[i] for i in range(len(ids)) if i not in test_set]
        test_ids = [ids[i] for i in test]
        out.append((train_ids, test_ids))
    return out


def build_confusion(y_true, y_pred, n_classes: int) -> np.ndarray:
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(confusion, (np.asarray(y_true), np.asarray(y_pred)), 1)
    return confusion


def metrics(confusion) -> tuple[float, float]:
    """(weighted accuracy, unweighted accuracy) from a confusion matrix."""
    confusion = np.asarray(confusion)
    if confusion.ndim != 2 or confusion.shape[0] != confusion.shape[1]:
        raise ValidationError(f"metrics: confusion matrix must be square, got {confusion.shape}")
    if (confusion < 0).any():
        raise ValidationError("metrics: negative counts")
    row_sums = confusion.sum(axis=1)
    total = confusion.sum()
    if total == 0:
        raise ValidationError("metrics: all-zero confusion matrix")
    wa = float(np.trace(confusion) / total)
    present = row_sums > 0
    recalls = np.diag(confusion)[present] / row_sums[present]
    ua = float(recalls.mean())
    return wa, ua


def cross_validate(
    x,
    y,
    class_set: list[str],
    cv_cfg: CvConfig,
    forest_cfg: ForestConfig,
    skipped=(),
) -> EvalReport:
    """k-fold CV of the forest on precomputed features.

    x: (n, F) feature matrix; y: int class codes into class_set. Fold f
    trains with seed path (forest seed, f), so reports are byte-stable
    across runs and parallel schedules.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    n_classes = len(class_set)
    test_folds = _fold_indices(y, cv_cfg, n_classes)
    all_idx = np.arange(y.size)
    confusion = np.zeros((n_classes, n_classes), dtype=np.int64)
    per_fold = []
    for f, test in enumerate(test_folds):
        if test.size == 0:
            continue
        train = np.setdiff1d(all_idx, test, assume_unique=True)
        model = fit_forest(
            x[train], y[train], n_classes, forest_cfg, seed_entropy=(forest_cfg.seed, f)
        )
        fold_confusion = build_confusion(y[test], model.predict(x[test]), n_classes)
        confusion += fold_confusion
        per_fold.append(metrics(fold_confusion))
    wa, ua = metrics(confusion)
    return EvalReport(
        class_set=list(class_set),
        confusion=confusion,
        wa=wa,
        ua=ua,
        per_fold=per_fold,
        skipped=list(skipped),
    )
