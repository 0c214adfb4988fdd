import numpy as np
import pytest

from epdyn.ep import Representation
from epdyn.errors import ConfigError, ValidationError
from epdyn.forest import ForestConfig, fit_forest, train_forest
from epdyn.forest import _split_numpy, backend


def perfect_threshold_exists(x, y):
    """Brute-force oracle: some single threshold separates the two classes."""
    for t in np.unique(x):
        left = y[x <= t]
        right = y[x > t]
        if left.size and right.size and len(set(left)) == 1 and len(set(right)) == 1:
            return True
    return False


class TestSplitKernelBackends:
    def test_backends_available(self):
        assert "python" in backend.available_backends()

    def test_backends_agree_bitwise(self):
        impls = [_split_numpy.best_split_gathered]
        try:
            from epdyn.forest import _split_fast

            impls.append(_split_fast.best_split_gathered)
        except ImportError:
            pytest.skip("compiled kernel not built")
        rng = np.random.default_rng(0)
        for trial in range(250):
            n = int(rng.integers(2, 50))
            k = int(rng.integers(1, 7))
            n_classes = int(rng.integers(2, 5))
            min_leaf = int(rng.integers(1, 4))
            # heavy value ties via quantization
            values = np.ascontiguousarray(np.round(rng.standard_normal((n, k)) * 2.0) / 2.0)
            labels = rng.integers(0, n_classes, n).astype(np.int64)
            orders = np.ascontiguousarray(np.argsort(values, axis=0), dtype=np.int64)
            results = [impl(values, orders, labels, n_classes, min_leaf) for impl in impls]
            assert results[0] == results[1], (trial, results)

    def test_no_valid_split_on_constant_block(self):
        values = np.ones((8, 3))
        orders = np.ascontiguousarray(np.argsort(values, axis=0), dtype=np.int64)
        labels = np.array([0, 1] * 4, dtype=np.int64)
        j, _, _ = _split_numpy.best_split_gathered(values, orders, labels, 2, 1)
        assert j == -1

    def test_min_leaf_respected(self):
        values = np.arange(6.0)[:, None]
        orders = np.ascontiguousarray(np.argsort(values, axis=0), dtype=np.int64)
        labels = np.array([0, 0, 0, 1, 1, 1], dtype=np.int64)
        j, thr, _ = _split_numpy.best_split_gathered(values, orders, labels, 2, 3)
        assert j == 0
        assert 2.0 <= thr < 3.0  # only the middle boundary leaves 3 per side

    def test_separable_split_found(self):
        values = np.array([[0.0], [0.1], [0.9], [1.0]])
        orders = np.ascontiguousarray(np.argsort(values, axis=0), dtype=np.int64)
        labels = np.array([0, 0, 1, 1], dtype=np.int64)
        j, thr, _ = _split_numpy.best_split_gathered(values, orders, labels, 2, 1)
        assert j == 0
        assert 0.1 <= thr < 0.9


class TestForest:
    def test_separable_data_fits_exactly(self):
        x = np.array([[0.0], [0.1], [0.9], [1.0]])
        y = np.array([0, 0, 1, 1])
        assert perfect_threshold_exists(x[:, 0], y)  # oracle first
        model = fit_forest(x, y, 2, ForestConfig(trees=5, seed=3))
        assert np.array_equal(model.predict(x), y)

    def test_constant_features_tie_break_class(self):
        x = np.ones((20, 3))
        y = np.array([0, 1] * 10)
        model = fit_forest(x, y, 2, ForestConfig(trees=9, bootstrap=False, seed=0))
        # no valid split anywhere; every leaf ties and argmax picks class 0
        assert np.array_equal(model.predict(x), np.zeros(20, dtype=np.int64))
        assert float(np.mean(model.predict(x) == y)) == 0.5

    def test_constant_features_with_bootstrap_near_chance(self):
        x = np.ones((20, 3))
        y = np.array([0, 1] * 10)
        model = fit_forest(x, y, 2, ForestConfig(trees=15, seed=5))
        pred = model.predict(x)
        assert np.unique(pred).size == 1  # same leaf for every sample
        assert float(np.mean(pred == y)) == 0.5

    def test_same_seed_identical_predictions(self):
        rng = np.random.default_rng(6)
        x = rng.standard_normal((60, 5))
        y = (x[:, 0] + 0.3 * rng.standard_normal(60) > 0).astype(np.int64)
        a = fit_forest(x, y, 2, ForestConfig(trees=20, seed=11)).predict(x)
        b = fit_forest(x, y, 2, ForestConfig(trees=20, seed=11)).predict(x)
        assert np.array_equal(a, b)

    def test_backend_choice_does_not_change_model(self):
        if "compiled" not in backend.available_backends():
            pytest.skip("compiled kernel not built")
        rng = np.random.default_rng(7)
        x = np.round(rng.standard_normal((80, 6)), 1)  # ties included
        y = rng.integers(0, 3, 80).astype(np.int64)
        previous = backend.active_backend()
        try:
            backend.set_backend("compiled")
            pred_c = fit_forest(x, y, 3, ForestConfig(trees=15, seed=2)).predict(x)
            backend.set_backend("python")
            pred_p = fit_forest(x, y, 3, ForestConfig(trees=15, seed=2)).predict(x)
        finally:
            backend.set_backend(previous)
        assert np.array_equal(pred_c, pred_p)

    def test_single_class_rejected(self):
        x = np.random.default_rng(0).standard_normal((10, 2))
        with pytest.raises(ValidationError, match="single class"):
            fit_forest(x, np.zeros(10, dtype=np.int64), 2, ForestConfig(trees=3))

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            ForestConfig(trees=0)
        with pytest.raises(ConfigError):
            ForestConfig(min_samples_leaf=0)
        with pytest.raises(ConfigError):
            ForestConfig(max_features=0)
        with pytest.raises(ConfigError):
            ForestConfig(seed=-1)

    def test_predict_shape_check(self):
        x = np.array([[0.0], [1.0], [0.1], [0.9]])
        y = np.array([0, 1, 0, 1])
        model = fit_forest(x, y, 2, ForestConfig(trees=3, seed=1))
        with pytest.raises(ValidationError):
            model.predict(np.ones((2, 4)))


class TestTrainForestAdapter:
    def reps(self, values, labels):
        return [
            Representation(id=f"u{i}", label=label, method="avg", values=v)
            for i, (v, label) in enumerate(zip(values, labels))
        ]

    def test_trains_from_representations(self):
        values = [[0.0], [0.1], [0.9], [1.0]]
        labels = ["neg", "neg", "pos", "pos"]
        model = train_forest(self.reps(values, labels), labels, ForestConfig(trees=5, seed=0))
        assert model.class_set == ["neg", "pos"]
        assert model.predict_labels(np.array(values)) == labels

    def test_mixed_lengths_rejected(self):
        reps = [
            Representation(id="a", label="x", method="m", values=[1.0]),
            Representation(id="b", label="y", method="m", values=[1.0, 2.0]),
        ]
        with pytest.raises(ValidationError, match="lengths"):
            train_forest(reps, ["x", "y"], ForestConfig(trees=2))

    def test_unknown_label_rejected(self):
        values = [[0.0], [1.0]]
        labels = ["x", "y"]
        with pytest.raises(ValidationError, match="not in class_set"):
            train_forest(self.reps(values, labels), labels, ForestConfig(trees=2), class_set=["x"])
