"""From-scratch binary classifiers for measuring downstream accuracy of a
selected feature subset: k-nearest-neighbors, logistic regression, a gini
decision tree, and a bagged random forest. All predictions are deterministic;
the forest derives every random draw from its seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .data import Dataset

__all__ = [
    "MODEL_KINDS",
    "ModelSpec",
    "ConfusionCounts",
    "KNNClassifier",
    "LogisticClassifier",
    "DecisionTree",
    "RandomForest",
    "train_predict",
    "confusion",
    "accuracy",
]

MODEL_KINDS = ("knn", "logistic", "tree", "forest")

_DEFAULTS = {
    "knn": {"k": 5},
    "logistic": {"learning_rate": 0.1, "epochs": 500, "l2": 1e-4},
    "tree": {"max_depth": 10, "min_split": 2},
    "forest": {
        "n_trees": 100,
        "features_per_split": "sqrt",
        "seed": 0,
        "bootstrap": True,
        "max_depth": 10,
        "min_split": 2,
    },
}


@dataclass(frozen=True)
class ModelSpec:
    """Classifier kind plus hyperparameters (unset ones take the defaults)."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown classifier kind {self.kind!r}")
        merged = dict(_DEFAULTS[self.kind])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise ValueError(f"unknown {self.kind} hyperparameters: {sorted(unknown)}")
        merged.update(self.params)
        object.__setattr__(self, "params", merged)
        positive = {
            "k": 1, "learning_rate": 0, "epochs": 1, "max_depth": 1,
            "min_split": 2, "n_trees": 1,
        }
        for name, floor in positive.items():
            if name in merged and merged[name] < floor:
                raise ValueError(f"{name} must be >= {floor}")
        if merged.get("l2", 0) < 0:
            raise ValueError("l2 must be nonnegative")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


class KNNClassifier:
    """Majority vote over the k nearest training points (Euclidean, raw
    feature values, vote ties to class 0)."""

    def __init__(self, k=5):
        self.k = k

    def fit(self, X, y):
        self.X = np.asarray(X, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.int64)
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[0] == 0:
            return np.empty(0, dtype=np.int64)
        k = min(self.k, self.X.shape[0])
        d2 = (
            (X**2).sum(axis=1)[:, None]
            + (self.X**2).sum(axis=1)[None, :]
            - 2.0 * (X @ self.X.T)
        )
        # stable sort keeps the lowest train index on distance ties
        nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
        votes_for_1 = self.y[nearest].sum(axis=1)
        return (votes_for_1 * 2 > k).astype(np.int64)


class LogisticClassifier:
    """Full-batch gradient descent on L2-regularized logistic loss; features
    are standardized with training-fold statistics."""

    def __init__(self, learning_rate=0.1, epochs=500, l2=1e-4):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.l2 = l2

    def _standardize(self, X):
        return (X - self.mean_) / self.std_

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        std[std == 0] = 1.0
        self.std_ = std
        Z = self._standardize(X)
        n = Z.shape[0]
        self.w_ = np.zeros(Z.shape[1])
        self.b_ = 0.0
        for _ in range(self.epochs):
            p = expit(Z @ self.w_ + self.b_)
            err = p - y
            self.w_ -= self.learning_rate * (Z.T @ err / n + self.l2 * self.w_)
            self.b_ -= self.learning_rate * err.mean()
        return self

    def predict(self, X):
        Z = self._standardize(np.asarray(X, dtype=np.float64))
        return (expit(Z @ self.w_ + self.b_) >= 0.5).astype(np.int64)


def _gini_best_split(X, y, feature_ids):
    """Best (weighted child gini, feature, threshold) over midpoint splits.

    Evaluates all candidate features at once; on exact ties the earliest
    feature in ``feature_ids`` and then the lowest threshold wins.
    """
    n = y.size
    feats = np.asarray(feature_ids, dtype=np.intp)
    Xs = X[:, feats]
    order = np.argsort(Xs, axis=0, kind="stable")
    xs = np.take_along_axis(Xs, order, axis=0)
    ones = np.cumsum(y[order], axis=0, dtype=np.float64)
    valid = xs[:-1] < xs[1:]
    if not valid.any():
        return np.inf, -1, 0.0
    nl = np.arange(1, n, dtype=np.float64)[:, None]
    ol = ones[:-1]
    nr = n - nl
    orr = ones[-1] - ol
    gl = 1.0 - (ol / nl) ** 2 - ((nl - ol) / nl) ** 2
    gr = 1.0 - (orr / nr) ** 2 - ((nr - orr) / nr) ** 2
    w = (nl * gl + nr * gr) / n
    w[~valid] = np.inf
    flat = int(np.argmin(w.T))  # scans feature-major: ties keep earlier feature
    col, pos = divmod(flat, n - 1)
    return float(w[pos, col]), int(feats[col]), float((xs[pos, col] + xs[pos + 1, col]) / 2.0)


def _majority(y):
    ones = int(y.sum())
    return 1 if ones * 2 > y.size else 0


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, value=None, feature=None, threshold=None, left=None, right=None):
        self.value = value
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right


class DecisionTree:
    """Gini-impurity decision tree on continuous features (x <= t goes left)."""

    def __init__(self, max_depth=10, min_split=2):
        self.max_depth = max_depth
        self.min_split = min_split

    def fit(self, X, y, rng=None, m_try=None):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        self._rng = rng
        self._m_try = m_try if m_try is not None and m_try < X.shape[1] else None
        self.root_ = self._build(X, y, depth=0)
        self._rng = None
        return self

    def _build(self, X, y, depth):
        ones = int(y.sum())
        if (
            depth >= self.max_depth
            or y.size < self.min_split
            or ones == 0
            or ones == y.size
        ):
            return _Node(value=_majority(y))
        if self._m_try is None:
            feature_ids = range(X.shape[1])
        else:
            feature_ids = np.sort(self._rng.choice(X.shape[1], self._m_try, replace=False))
        parent_gini = 1.0 - (ones / y.size) ** 2 - (1 - ones / y.size) ** 2
        w, f, t = _gini_best_split(X, y, feature_ids)
        if f < 0 or w >= parent_gini:
            return _Node(value=_majority(y))
        mask = X[:, f] <= t
        return _Node(
            feature=f,
            threshold=t,
            left=self._build(X[mask], y[mask], depth + 1),
            right=self._build(X[~mask], y[~mask], depth + 1),
        )

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0], dtype=np.int64)
        self._fill(self.root_, X, np.arange(X.shape[0]), out)
        return out

    def _fill(self, node, X, idx, out):
        if node.value is not None:
            out[idx] = node.value
            return
        mask = X[idx, node.feature] <= node.threshold
        self._fill(node.left, X, idx[mask], out)
        self._fill(node.right, X, idx[~mask], out)


class RandomForest:
    """Bagged gini trees with per-node feature sampling and majority vote
    (vote ties to class 0); fully reproducible from the seed."""

    def __init__(self, n_trees=100, features_per_split="sqrt", seed=0,
                 bootstrap=True, max_depth=10, min_split=2):
        self.n_trees = n_trees
        self.features_per_split = features_per_split
        self.seed = seed
        self.bootstrap = bootstrap
        self.max_depth = max_depth
        self.min_split = min_split

    def _m_try(self, n_features):
        rule = self.features_per_split
        if rule == "sqrt":
            return max(1, int(np.sqrt(n_features)))
        if rule == "all":
            return n_features
        return max(1, min(int(rule), n_features))

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n = X.shape[0]
        m_try = self._m_try(X.shape[1])
        self.trees_ = []
        for child in np.random.SeedSequence(self.seed).spawn(self.n_trees):
            rng = np.random.default_rng(child)
            if self.bootstrap:
                idx = rng.integers(0, n, size=n)
                Xb, yb = X[idx], y[idx]
            else:
                Xb, yb = X, y
            tree = DecisionTree(self.max_depth, self.min_split)
            tree.fit(Xb, yb, rng=rng, m_try=m_try)
            self.trees_.append(tree)
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros(X.shape[0], dtype=np.int64)
        for tree in self.trees_:
            votes += tree.predict(X)
        return (votes * 2 > self.n_trees).astype(np.int64)


def _build_model(spec: ModelSpec):
    p = spec.params
    if spec.kind == "knn":
        return KNNClassifier(k=p["k"])
    if spec.kind == "logistic":
        return LogisticClassifier(p["learning_rate"], p["epochs"], p["l2"])
    if spec.kind == "tree":
        return DecisionTree(p["max_depth"], p["min_split"])
    return RandomForest(
        n_trees=p["n_trees"],
        features_per_split=p["features_per_split"],
        seed=p["seed"],
        bootstrap=p["bootstrap"],
        max_depth=p["max_depth"],
        min_split=p["min_split"],
    )


def train_predict(spec: ModelSpec, train: Dataset, test: Dataset, feature_subset) -> np.ndarray:
    """Train one classifier on the subset columns of `train` and predict `test`.

    A single-class training set short-circuits to constant predictions for
    every classifier kind.
    """
    subset = list(feature_subset)
    if not subset:
        raise ValueError("feature subset is empty")
    if train.n_samples == 0:
        raise ValueError("training set is empty")
    if train.feature_names != test.feature_names:
        raise ValueError("train and test do not share a feature space")
    classes = np.unique(train.labels)
    if classes.size == 1:
        return np.full(test.n_samples, int(classes[0]), dtype=np.int64)
    Xtr = train.values[:, subset]
    Xte = test.values[:, subset]
    model = _build_model(spec)
    model.fit(Xtr, train.labels)
    return model.predict(Xte)


def confusion(predicted, actual) -> ConfusionCounts:
    """Tally binary predictions against ground truth (positive class is 1)."""
    p = np.asarray(predicted, dtype=np.int64)
    a = np.asarray(actual, dtype=np.int64)
    if p.shape != a.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {a.shape}")
    for name, arr in (("predicted", p), ("actual", a)):
        if arr.size and not np.all((arr == 0) | (arr == 1)):
            raise ValueError(f"{name} labels must be 0 or 1")
    return ConfusionCounts(
        tp=int(np.sum((p == 1) & (a == 1))),
        tn=int(np.sum((p == 0) & (a == 0))),
        fp=int(np.sum((p == 1) & (a == 0))),
        fn=int(np.sum((p == 0) & (a == 1))),
    )


def accuracy(c: ConfusionCounts) -> float:
    """Share of correct predictions."""
    if c.total == 0:
        raise ValueError("confusion counts are all zero")
    return (c.tp + c.tn) / c.total
