"""Base learners (CART tree, bagged forest, logistic regression) and
ranking metrics. The tree kernels live in fairsel._kernels; everything
here is the configuration, dispatch, and metric layer."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from fairsel import _kernels
from fairsel._kernels._pure import _mix64
from fairsel.errors import DataError, NumericalError

THREADS_ENV = "FAIRSEL_THREADS"


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int = 8
    min_samples_split: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 25
    max_features: object = "sqrt"  # "sqrt" or int >= 1
    bootstrap: bool = True
    tree: TreeConfig = field(default_factory=TreeConfig)
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        mf = self.max_features
        if mf != "sqrt" and not (isinstance(mf, int) and mf >= 1):
            raise ValueError('max_features must be "sqrt" or an int >= 1')


@dataclass(frozen=True)
class FittedModel:
    """A fitted learner plus the column subset it expects at predict."""

    kind: str  # tree | forest | logistic
    parameters: object
    feature_indices: tuple


def derive_seed(base, i):
    """Child seed for the i-th member of a deterministic ensemble."""
    return _mix64((base + (i + 1) * 0x9E3779B97F4A7C15) & ((1 << 64) - 1))


def _column_view(dataset, cols):
    cols = tuple(int(c) for c in cols)
    if not cols:
        raise DataError("column subset must be nonempty")
    X = np.ascontiguousarray(dataset.features[:, cols], dtype=np.float64)
    y = np.ascontiguousarray(dataset.labels, dtype=np.int32)
    return X, y, cols


def fit_tree(train, cols, cfg):
    """CART with Gini impurity on the given column subset."""
    X, y, cols = _column_view(train, cols)
    if X.shape[0] == 0:
        raise DataError("empty training set")
    tree = _kernels.fit_tree(
        X, y, cfg.max_depth, cfg.min_samples_split, X.shape[1], False,
        cfg.seed
    )
    return FittedModel("tree", tree, cols)


def _resolve_max_features(mf, k):
    if mf == "sqrt":
        return max(1, int(math.isqrt(k)))
    return min(int(mf), k)


def fit_forest(train, cols, cfg):
    """Bagged CART forest; tree i is deterministic in seed mixed with i.

    FAIRSEL_THREADS > 0 fits trees in a thread pool; per-tree seeds are
    fixed up front so the result is independent of execution order.
    """
    X, y, cols = _column_view(train, cols)
    if X.shape[0] == 0:
        raise DataError("empty training set")
    k = X.shape[1]
    m = _resolve_max_features(cfg.max_features, k)
    tc = cfg.tree
    seeds = [derive_seed(cfg.seed, i) for i in range(cfg.n_trees)]

    def fit_one(seed):
        return _kernels.fit_tree(
            X, y, tc.max_depth, tc.min_samples_split, m, cfg.bootstrap, seed
        )

    workers = int(os.environ.get(THREADS_ENV, "0") or "0")
    if workers > 0 and cfg.n_trees > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trees = list(pool.map(fit_one, seeds))
    else:
        trees = [fit_one(s) for s in seeds]
    return FittedModel("forest", tuple(trees), cols)


def fit_logistic(train, cols, lr=0.1, epochs=300):
    """Full-batch gradient descent on mean log-loss with a bias term.

    Weights start at zero, so zero epochs predicts 0.5 everywhere.
    Expects standardized inputs upstream.
    """
    X, y, cols = _column_view(train, cols)
    n = X.shape[0]
    if n == 0:
        raise DataError("empty training set")
    yf = y.astype(np.float64)
    w = np.zeros(X.shape[1])
    b = 0.0
    for _ in range(epochs):
        p = _sigmoid(X @ w + b)
        err = p - yf
        w = w - lr * (X.T @ err) / n
        b = b - lr * float(err.mean())
        if not (np.all(np.isfinite(w)) and math.isfinite(b)):
            raise NumericalError("logistic loss diverged; lower lr")
    return FittedModel("logistic", (w, b), cols)


def _sigmoid(z):
    out = np.empty_like(z)
    posm = z >= 0
    out[posm] = 1.0 / (1.0 + np.exp(-z[posm]))
    ez = np.exp(z[~posm])
    out[~posm] = ez / (1.0 + ez)
    return out


def logistic_loss(model, rows, labels):
    """Mean log-loss of a fitted logistic model (for trajectory checks)."""
    p = predict_proba(model, rows)
    p = np.clip(p, 1e-12, 1.0 - 1e-12)
    yf = np.asarray(labels, dtype=np.float64)
    return float(-(yf * np.log(p) + (1.0 - yf) * np.log(1.0 - p)).mean())


def predict_proba(model, rows):
    """Class-1 probability per row of the model's expected columns."""
    X = np.ascontiguousarray(rows, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(model.feature_indices):
        raise DataError(
            f"expected {len(model.feature_indices)} columns, "
            f"got {X.shape[1] if X.ndim == 2 else 'non-matrix'}"
        )
    if model.kind == "tree":
        return _kernels.predict_tree(*model.parameters, X)
    if model.kind == "forest":
        acc = np.zeros(X.shape[0])
        for tree in model.parameters:
            acc += _kernels.predict_tree(*tree, X)
        return acc / len(model.parameters)
    if model.kind == "logistic":
        w, b = model.parameters
        return _sigmoid(X @ w + b)
    raise ValueError(f"unknown model kind: {model.kind}")


def predict_on(model, dataset):
    """Predict on a full Dataset by slicing the model's columns."""
    return predict_proba(model, dataset.features[:, model.feature_indices])


def auc(scores, labels):
    """Tie-corrected Mann-Whitney AUC.

    Equals pair counting with 0.5 per tied pair exactly: midranks and
    pair counts are both multiples of 1/2, so no rounding occurs.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n_pos = int((labels == 1).sum())
    n_neg = int((labels == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise DataError("AUC needs at least one positive and one negative")
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores), dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    n = len(scores)
    while i < n:
        j = i
        while j + 1 < n and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        # midrank of the tie group [i, j], 1-based
        ranks[order[i:j + 1]] = (i + j + 2) / 2.0
        i = j + 1
    rank_sum = float(ranks[labels == 1].sum())
    u = rank_sum - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def roc_points(scores, labels):
    """ROC curve points swept over distinct scores, descending.

    Starts at (0, 0); the lowest threshold contributes (1, 1). The
    trapezoidal area under the points equals auc().
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n_pos = int((labels == 1).sum())
    n_neg = int((labels == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC needs at least one positive and one negative")
    points = [(0.0, 0.0)]
    for thr in np.unique(scores)[::-1]:
        pred = scores >= thr
        tp = int((pred & (labels == 1)).sum())
        fp = int((pred & (labels == 0)).sum())
        points.append((fp / n_neg, tp / n_pos))
    return points


def trapezoid_area(points):
    """Area under a piecewise-linear (fpr, tpr) curve."""
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area
