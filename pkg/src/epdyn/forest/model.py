"""Random-forest classifier with pinned, reproducible semantics.

CART-style trees: Gini impurity, bootstrap resampling, a fresh random
feature subset of size max_features per split (floor(sqrt(F)) by default),
unlimited depth, leaves of at least min_samples_leaf samples. If every
candidate feature in a node's subset is constant the node becomes a leaf.

Prediction is a majority vote over trees; ties break toward the lowest
class index (= class-set order). Tree t draws its randomness from a
generator seeded with (seed..., t), so training is deterministic and
independent of any parallel schedule.
"""

import math
from dataclasses import dataclass

import numpy as np

from epdyn.errors import ConfigError, ValidationError
from epdyn.forest import backend


@dataclass
class ForestConfig:
    trees: int = 100
    max_features: int | None = None  # None: floor(sqrt(feature count)), min 1
    min_samples_leaf: int = 1
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.trees < 1:
            raise ConfigError(f"forest needs trees >= 1, got {self.trees}")
        if self.max_features is not None and self.max_features < 1:
            raise ConfigError("max_features must be >= 1 when given")
        if self.min_samples_leaf < 1:
            raise ConfigError("min_samples_leaf must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")


@dataclass(eq=False)
class _Tree:
    feature: np.ndarray  # int64; -1 at leaves
    threshold: np.ndarray  # float64
    left: np.ndarray  # int64 child indices
    right: np.ndarray
    leaf_class: np.ndarray  # int64; -1 at internal nodes


def _grow_tree(x, y, n_classes, max_features, min_leaf, rng) -> _Tree:
    n_features = x.shape[1]
    feature, threshold, left, right, leaf_class = [], [], [], [], []

    def alloc() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        leaf_class.append(-1)
        return len(feature) - 1

    root = alloc()
    stack = [(root, np.arange(x.shape[0], dtype=np.int64))]
    while stack:
        node, idx = stack.pop()
        y_node = np.ascontiguousarray(y[idx])
        counts = np.bincount(y_node, minlength=n_classes)
        if counts.max() == idx.size or idx.size < max(2, 2 * min_leaf):
            leaf_class[node] = int(np.argmax(counts))
            continue
        feats = rng.permutation(n_features)[:max_features]
        gathered = np.ascontiguousarray(x[idx][:, feats])
        orders = np.ascontiguousarray(np.argsort(gathered, axis=0), dtype=np.int64)
        j, thr, _ = backend.best_split(gathered, orders, y_node, n_classes, min_leaf)
        if j < 0:
            leaf_class[node] = int(np.argmax(counts))
            continue
        feat = int(feats[j])
        go_left = x[idx, feat] <= thr
        feature[node] = feat
        threshold[node] = thr
        left_node, right_node = alloc(), alloc()
        left[node] = left_node
        right[node] = right_node
        stack.append((right_node, idx[~go_left]))
        stack.append((left_node, idx[go_left]))  # popped first: preorder, left first
    return _Tree(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        leaf_class=np.asarray(leaf_class, dtype=np.int64),
    )


def _predict_tree(tree: _Tree, x) -> np.ndarray:
    node = np.zeros(x.shape[0], dtype=np.int64)
    active = np.flatnonzero(tree.feature[node] >= 0)
    while active.size:
        at = node[active]
        go_left = x[active, tree.feature[at]] <= tree.threshold[at]
        node[active] = np.where(go_left, tree.left[at], tree.right[at])
        active = active[tree.feature[node[active]] >= 0]
    return tree.leaf_class[node]


@dataclass(eq=False)
class ForestModel:
    config: ForestConfig
    n_classes: int
    n_features: int
    trees: list
    class_set: list[str] | None = None

    def predict(self, x) -> np.ndarray:
        """Majority-vote class codes; ties go to the lowest class index."""
        x = np.ascontiguousarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.n_features:
            raise ValidationError(
                f"predict: expected (n, {self.n_features}) features, got {x.shape}"
            )
        votes = np.zeros((x.shape[0], self.n_classes), dtype=np.int64)
        rows = np.arange(x.shape[0])
        for tree in self.trees:
            votes[rows, _predict_tree(tree, x)] += 1
        return np.argmax(votes, axis=1)

    def predict_labels(self, x) -> list[str]:
        if self.class_set is None:
            raise ValidationError("predict_labels: model has no class_set")
        return [self.class_set[c] for c in self.predict(x)]


def fit_forest(x, y, n_classes: int, cfg: ForestConfig, seed_entropy=None) -> ForestModel:
    """Train a forest on (n, F) features and int class codes in [0, n_classes).

    `seed_entropy` extends the seed path (e.g. per CV fold); tree t always
    uses SeedSequence(entropy + (t,)).
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    if x.ndim != 2 or x.shape[0] != y.shape[0] or x.shape[0] == 0:
        raise ValidationError(f"fit_forest: bad shapes x{x.shape}, y{y.shape}")
    if not np.isfinite(x).all():
        raise ValidationError("fit_forest: non-finite feature values")
    if np.unique(y).size < 2:
        raise ValidationError("fit_forest: training data contains a single class")
    n = x.shape[0]
    max_features = cfg.max_features
    if max_features is None:
        max_features = max(1, math.floor(math.sqrt(x.shape[1])))
    max_features = min(max_features, x.shape[1])
    entropy = (cfg.seed,) if seed_entropy is None else tuple(seed_entropy)
    trees = []
    for t in range(cfg.trees):
        rng = np.random.default_rng(np.random.SeedSequence(entropy + (t,)))
        if cfg.bootstrap:
            sample = rng.integers(0, n, size=n)
            xt, yt = x[sample], y[sample]
        else:
            xt, yt = x, y
        trees.append(_grow_tree(xt, yt, n_classes, max_features, cfg.min_samples_leaf, rng))
    return ForestModel(config=cfg, n_classes=n_classes, n_features=x.shape[1], trees=trees)


def train_forest(features, labels, cfg: ForestConfig, class_set=None) -> ForestModel:
    """Train from Representation objects and string labels.

    class_set defaults to first-appearance order of `labels`.
    """
    features = list(features)
    labels = list(labels)
    if len(features) != len(labels) or not features:
        raise ValidationError("train_forest: features and labels must align and be nonempty")
    sizes = {rep.values.size for rep in features}
    if len(sizes) != 1:
        raise ValidationError(f"train_forest: mixed feature lengths {sorted(sizes)}")
    if class_set is None:
        class_set = []
        for label in labels:
            if label not in class_set:
                class_set.append(label)
    index = {label: i for i, label in enumerate(class_set)}
    try:
        y = np.array([index[label] for label in labels], dtype=np.int64)
    except KeyError as exc:
        raise ValidationError(f"train_forest: label {exc.args[0]!r} not in class_set") from exc
    x = np.vstack([rep.values for rep in features])
    model = fit_forest(x, y, len(class_set), cfg)
    model.class_set = list(class_set)
    return model
