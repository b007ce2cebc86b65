import numpy as np
import pytest

from miselect.classifiers import (
    ConfusionCounts,
    DecisionTree,
    KNNClassifier,
    LogisticClassifier,
    ModelSpec,
    RandomForest,
    accuracy,
    confusion,
    train_predict,
)
from miselect.data import Dataset


def make_dataset(values, labels):
    values = np.asarray(values, dtype=float)
    names = tuple(f"f{i}" for i in range(values.shape[1]))
    return Dataset(names, values, np.asarray(labels))


def separable_dataset(n=20, seed=0):
    rng = np.random.default_rng(seed)
    neg = rng.normal(loc=(-2.0, -2.0), scale=0.3, size=(n // 2, 2))
    pos = rng.normal(loc=(2.0, 2.0), scale=0.3, size=(n // 2, 2))
    values = np.vstack([neg, pos])
    labels = np.array([0] * (n // 2) + [1] * (n // 2))
    return make_dataset(values, labels)


class TestModelSpec:
    def test_defaults_merged(self):
        spec = ModelSpec("forest", {"n_trees": 7})
        assert spec.params["n_trees"] == 7
        assert spec.params["features_per_split"] == "sqrt"

    def test_validation(self):
        with pytest.raises(ValueError, match="unknown classifier"):
            ModelSpec("svm")
        with pytest.raises(ValueError, match="unknown knn"):
            ModelSpec("knn", {"depth": 3})
        with pytest.raises(ValueError, match="k must"):
            ModelSpec("knn", {"k": 0})
        with pytest.raises(ValueError, match="l2"):
            ModelSpec("logistic", {"l2": -1.0})


class TestTrainPredict:
    def test_knn_one_neighbor_recovers_training_labels(self):
        ds = separable_dataset()
        pred = train_predict(ModelSpec("knn", {"k": 1}), ds, ds, [0, 1])
        assert np.array_equal(pred, ds.labels)

    def test_single_class_training_constant_output(self):
        values = np.arange(12, dtype=float).reshape(6, 2)
        train = make_dataset(values, [1] * 6)
        test = make_dataset(values[:3], [0, 1, 0])
        for kind in ("knn", "logistic", "tree", "forest"):
            pred = train_predict(ModelSpec(kind), train, test, [0, 1])
            assert np.array_equal(pred, [1, 1, 1])

    def test_logistic_separable_perfect_training_fit(self):
        ds = separable_dataset()
        pred = train_predict(ModelSpec("logistic"), ds, ds, [0, 1])
        assert np.array_equal(pred, ds.labels)
        # exhaustive sign check of the learned boundary on every point
        model = LogisticClassifier().fit(ds.values, ds.labels)
        z = model._standardize(ds.values) @ model.w_ + model.b_
        assert np.all((z > 0) == (ds.labels == 1))

    def test_restricted_to_subset(self):
        # only feature 1 carries signal; subsetting to feature 0 must ignore it
        values = np.column_stack([np.zeros(10), np.r_[np.zeros(5), np.ones(5)]])
        ds = make_dataset(values, [0] * 5 + [1] * 5)
        pred = train_predict(ModelSpec("knn", {"k": 3}), ds, ds, [1])
        assert np.array_equal(pred, ds.labels)
        pred0 = train_predict(ModelSpec("knn", {"k": 3}), ds, ds, [0])
        assert len(set(pred0.tolist())) == 1

    def test_errors(self):
        ds = separable_dataset()
        empty = make_dataset(np.empty((0, 2)), [])
        with pytest.raises(ValueError, match="subset"):
            train_predict(ModelSpec("knn"), ds, ds, [])
        with pytest.raises(ValueError, match="empty"):
            train_predict(ModelSpec("knn"), empty, ds, [0])
        other = Dataset(("a", "b"), ds.values, ds.labels)
        with pytest.raises(ValueError, match="feature space"):
            train_predict(ModelSpec("knn"), ds, other, [0])

    def test_deterministic_across_runs(self):
        rng = np.random.default_rng(3)
        train = make_dataset(rng.normal(size=(40, 5)), rng.integers(0, 2, size=40))
        test = make_dataset(rng.normal(size=(15, 5)), rng.integers(0, 2, size=15))
        for kind in ("knn", "logistic", "tree", "forest"):
            spec = ModelSpec(kind)
            a = train_predict(spec, train, test, [0, 2, 4])
            b = train_predict(spec, train, test, [0, 2, 4])
            assert np.array_equal(a, b)


class TestKNNDetail:
    def test_vote_tie_goes_to_class_zero(self):
        model = KNNClassifier(k=2).fit([[0.0], [1.0]], [0, 1])
        assert model.predict([[0.5]]).tolist() == [0]

    def test_k_capped_at_train_size(self):
        model = KNNClassifier(k=10).fit([[0.0], [0.1], [5.0]], [0, 0, 1])
        assert model.predict([[0.0]]).tolist() == [0]


class TestTreeAndForest:
    def test_tree_fits_xor_style_split(self):
        values = np.array([[0.0], [1.0], [2.0], [3.0]])
        labels = np.array([0, 0, 1, 1])
        tree = DecisionTree().fit(values, labels)
        assert tree.predict(np.array([[0.5], [2.5]])).tolist() == [0, 1]

    def test_forest_single_tree_matches_plain_tree(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(60, 4))
        y = (X[:, 0] + X[:, 2] > 0).astype(int)
        forest = RandomForest(n_trees=1, features_per_split="all", bootstrap=False,
                              seed=9).fit(X, y)
        tree = DecisionTree().fit(X, y)
        Xt = rng.normal(size=(30, 4))
        assert np.array_equal(forest.predict(Xt), tree.predict(Xt))

    def test_forest_seed_reproducible(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(50, 3))
        y = rng.integers(0, 2, size=50)
        a = RandomForest(n_trees=10, seed=3).fit(X, y).predict(X)
        b = RandomForest(n_trees=10, seed=3).fit(X, y).predict(X)
        assert np.array_equal(a, b)

    def test_forest_learns_separable(self):
        ds = separable_dataset(n=40, seed=7)
        pred = train_predict(ModelSpec("forest", {"n_trees": 15}), ds, ds, [0, 1])
        assert np.array_equal(pred, ds.labels)


class TestConfusionAccuracy:
    def test_perfect_prediction(self):
        actual = [1] * 6 + [0] * 4
        c = confusion(actual, actual)
        assert (c.tp, c.tn, c.fp, c.fn) == (6, 4, 0, 0)
        assert accuracy(c) == 1.0

    def test_total_error(self):
        actual = np.array([1, 0, 1, 0])
        c = confusion(1 - actual, actual)
        assert c.tp == 0 and c.tn == 0
        assert accuracy(c) == 0.0

    def test_mixed_tally(self):
        c = confusion([1, 1, 0, 0], [1, 0, 0, 1])
        assert (c.tp, c.tn, c.fp, c.fn) == (1, 1, 1, 1)

    def test_accuracy_value(self):
        assert accuracy(ConfusionCounts(9, 9, 1, 1)) == 0.9

    def test_errors(self):
        with pytest.raises(ValueError, match="mismatch"):
            confusion([0, 1], [0])
        with pytest.raises(ValueError, match="labels"):
            confusion([0, 2], [0, 1])
        with pytest.raises(ValueError, match="zero"):
            accuracy(ConfusionCounts(0, 0, 0, 0))
        with pytest.raises(ValueError, match="nonnegative"):
            ConfusionCounts(-1, 0, 0, 0)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(8)
        p = rng.integers(0, 2, size=30)
        a = rng.integers(0, 2, size=30)
        base = accuracy(confusion(p, a))
        for _ in range(10):
            perm = rng.permutation(30)
            assert accuracy(confusion(p[perm], a[perm])) == base

    def test_relabeling_swaps_counts(self):
        rng = np.random.default_rng(9)
        p = rng.integers(0, 2, size=25)
        a = rng.integers(0, 2, size=25)
        c = confusion(p, a)
        c_swapped = confusion(1 - p, 1 - a)
        assert (c_swapped.tp, c_swapped.tn) == (c.tn, c.tp)
        assert (c_swapped.fp, c_swapped.fn) == (c.fn, c.fp)
        assert accuracy(c_swapped) == accuracy(c)
