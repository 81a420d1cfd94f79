"""Interpretable models: elastic-net logistic regression and random forest.

The logistic model minimizes the mean negative log-likelihood plus an
elastic-net penalty

    (1/n) * sum_i [log(1 + exp(eta_i)) - y_i * eta_i]
        + lambda * ((1 - alpha)/2 * ||beta||_2^2 + alpha * ||beta||_1)

by cyclic coordinate descent with soft-thresholding.  Each coordinate step
uses the conservative curvature bound 1/4 for the logistic Hessian, which
makes the objective non-increasing at every step.  The intercept is never
penalized.

The random forest grows Gini-impurity trees to purity on bootstrap samples
and reports mean-decrease-in-impurity feature importances normalized to
sum 1; combined with the signs of the logistic weights this gives the
importance/direction report used for interpretation.
"""

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, FeatureSpaceMismatch, NonFinite, SingleClass
from .evaluate import prf1


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _log1pexp(z):
    z = np.asarray(z, dtype=float)
    out = np.where(z > 0, z, 0.0) + np.log1p(np.exp(-np.abs(z)))
    return out


@dataclass
class EnlrModel:
    beta: np.ndarray
    b: float
    alpha: float
    lam: float
    feature_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")


def enlr_objective(X, y, beta, b, alpha, lam) -> float:
    """Penalized mean negative log-likelihood."""
    eta = X @ beta + b
    nll = float(np.mean(_log1pexp(eta) - y * eta))
    penalty = lam * ((1 - alpha) / 2.0 * float(beta @ beta) + alpha * float(np.abs(beta).sum()))
    return nll + penalty


def lambda_max(X, y, alpha) -> float:
    """Smallest lambda that zeroes every coefficient (alpha > 0): the
    screening value max_j |X_j^T (y - mean(y))| / (n * alpha)."""
    if alpha <= 0:
        raise ValueError("lambda_max is defined for alpha > 0")
    y = np.asarray(y, dtype=float)
    resid = y - y.mean()
    return float(np.max(np.abs(X.T @ resid)) / (len(y) * alpha))


def _soft_threshold(z: float, gamma: float) -> float:
    if z > gamma:
        return z - gamma
    if z < -gamma:
        return z + gamma
    return 0.0


def fit_enlr(
    X,
    y,
    alpha: float = 0.5,
    lam: float = 0.01,
    max_sweeps: int = 1000,
    tol: float = 1e-6,
    track_objective: bool = False,
) -> tuple[np.ndarray, float, list[float]]:
    """Coordinate descent for one (alpha, lambda) point.

    Returns (beta, intercept, objective_history); the history has one entry
    per sweep and is non-increasing.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, m = X.shape
    if len(y) != n:
        raise DimensionMismatch(f"X has {n} rows but y has {len(y)} entries")
    if len(np.unique(y)) < 2:
        raise SingleClass("training labels contain a single class")

    ybar = float(np.clip(y.mean(), 1e-12, 1 - 1e-12))
    b = math.log(ybar / (1 - ybar))
    beta = np.zeros(m)
    eta = np.full(n, b)
    col_sq = (X * X).mean(axis=0)  # (1/n) sum_i x_ij^2
    history: list[float] = []

    for _ in range(max_sweeps):
        max_delta = 0.0
        # Intercept first (unpenalized); curvature bound 1/4.
        p = sigmoid(eta)
        grad_b = float(np.mean(p - y))
        delta_b = -grad_b / 0.25
        if delta_b != 0.0:
            b += delta_b
            eta += delta_b
            max_delta = abs(delta_b)
        for j in range(m):
            mj = 0.25 * col_sq[j]
            denom = mj + lam * (1 - alpha)
            if denom <= 0.0:
                continue
            p = sigmoid(eta)
            grad_j = float(np.mean(X[:, j] * (p - y)))
            new_bj = _soft_threshold(mj * beta[j] - grad_j, lam * alpha) / denom
            delta = new_bj - beta[j]
            if delta != 0.0:
                eta += delta * X[:, j]
                beta[j] = new_bj
                max_delta = max(max_delta, abs(delta))
        if track_objective:
            history.append(enlr_objective(X, y, beta, b, alpha, lam))
        if not np.all(np.isfinite(beta)) or not math.isfinite(b):
            raise NonFinite("coordinate descent diverged")
        if max_delta < tol:
            break
    return beta, b, history


def kkt_violation(X, y, beta, b, alpha, lam) -> float:
    """Largest excess of |smooth gradient| over lambda*alpha among the
    zero coefficients (<= 0 at a KKT point)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    p = sigmoid(X @ beta + b)
    grad = X.T @ (p - y) / len(y)
    zero = beta == 0.0
    if not np.any(zero):
        return 0.0
    return float(np.max(np.abs(grad[zero])) - lam * alpha)


def _cv_folds(n: int, k: int, seed: int) -> list[np.ndarray]:
    order = np.random.default_rng(seed).permutation(n)
    return [order[i::k] for i in range(k)]


def train_enlr(
    X,
    y,
    alpha_grid: Sequence[float] = (0.1, 0.5, 0.9),
    lambda_grid: Sequence[float] = (0.0001, 0.001, 0.01),
    cv_folds: int = 5,
    seed: int = 0,
    feature_names: list[str] | None = None,
    max_sweeps: int = 1000,
    tol: float = 1e-6,
) -> EnlrModel:
    """Grid search over (alpha, lambda) by cross-validated minority-class
    F1, then refit on the full training data at the best point."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(np.unique(y)) < 2:
        raise SingleClass("training labels contain a single class")
    grid = [(a, l) for a in alpha_grid for l in lambda_grid]
    if len(grid) > 1 and cv_folds >= 2:
        folds = _cv_folds(len(y), cv_folds, seed)
        all_idx = np.arange(len(y))
        best, best_f1 = grid[0], -1.0
        for a, l in grid:
            scores = []
            for fold in folds:
                train_idx = np.setdiff1d(all_idx, fold)
                if len(np.unique(y[train_idx])) < 2 or len(fold) == 0:
                    continue
                beta, b, _ = fit_enlr(
                    X[train_idx], y[train_idx], a, l, max_sweeps=max_sweeps, tol=tol
                )
                probs = sigmoid(X[fold] @ beta + b)
                scores.append(prf1(probs >= 0.5, y[fold] >= 0.5).f1)
            mean_f1 = float(np.mean(scores)) if scores else 0.0
            if mean_f1 > best_f1:
                best, best_f1 = (a, l), mean_f1
        alpha, lam = best
    else:
        alpha, lam = grid[0]
    beta, b, _ = fit_enlr(X, y, alpha, lam, max_sweeps=max_sweeps, tol=tol)
    return EnlrModel(beta, b, alpha, lam, feature_names or [])


def predict_enlr(model: EnlrModel, x) -> float | np.ndarray:
    """sigma(beta.x + b); accepts a single vector or a matrix of rows."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        if x.shape[0] != model.beta.shape[0]:
            raise DimensionMismatch(f"{x.shape[0]} != {model.beta.shape[0]}")
        return float(sigmoid(x @ model.beta + model.b))
    if x.shape[1] != model.beta.shape[0]:
        raise DimensionMismatch(f"{x.shape[1]} != {model.beta.shape[0]}")
    return sigmoid(x @ model.beta + model.b)


# ---------------------------------------------------------------------------
# Random forest


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    counts: np.ndarray | None = None  # class counts at a leaf

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass
class RfModel:
    trees: list[TreeNode]
    n_features: int
    features_per_split: int
    seed: int
    feature_names: list[str] = field(default_factory=list)
    importances: np.ndarray | None = None

    @property
    def n_trees(self) -> int:
        return len(self.trees)


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.sum(p * p))


def _best_split(X, y, idx, feat_candidates):
    """(feature, threshold, gain) of the best Gini split, or None."""
    n = len(idx)
    counts = np.bincount(y[idx], minlength=2).astype(float)
    parent_gini = _gini(counts)
    best = None
    best_gain = 1e-12
    for f in feat_candidates:
        values = X[idx, f]
        order = np.argsort(values, kind="stable")
        sorted_vals = values[order]
        sorted_y = y[idx][order]
        left = np.zeros(2)
        right = counts.copy()
        for i in range(n - 1):
            c = sorted_y[i]
            left[c] += 1
            right[c] -= 1
            if sorted_vals[i] == sorted_vals[i + 1]:
                continue
            n_left = i + 1
            n_right = n - n_left
            gain = parent_gini - (n_left * _gini(left) + n_right * _gini(right)) / n
            if gain > best_gain:
                best_gain = gain
                best = (f, (sorted_vals[i] + sorted_vals[i + 1]) / 2.0, gain)
    return best


def _grow_tree(X, y, idx, p_features, rng, importance, n_total):
    counts = np.bincount(y[idx], minlength=2).astype(float)
    node = TreeNode(counts=counts)
    if counts[0] == 0 or counts[1] == 0 or len(idx) < 2:
        return node
    m = X.shape[1]
    candidates = rng.choice(m, size=min(p_features, m), replace=False)
    split = _best_split(X, y, idx, candidates)
    if split is None and p_features < m:
        # The sampled features were uninformative; fall back to all of them
        # so consistent data is always fit to purity.
        split = _best_split(X, y, idx, np.arange(m))
    if split is None:
        return node
    f, threshold, gain = split
    importance[f] += gain * len(idx) / n_total
    mask = X[idx, f] <= threshold
    node.feature = f
    node.threshold = threshold
    node.left = _grow_tree(X, y, idx[mask], p_features, rng, importance, n_total)
    node.right = _grow_tree(X, y, idx[~mask], p_features, rng, importance, n_total)
    node.counts = None
    return node


def tree_predict(node: TreeNode, x) -> int:
    """Class vote of one tree for one sample; leaf ties go to class 0."""
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    return int(node.counts[1] > node.counts[0])


def train_rf(
    X,
    y,
    n_trees: int = 100,
    features_per_split: int | None = None,
    seed: int = 0,
    bootstrap: bool = True,
    feature_names: list[str] | None = None,
) -> RfModel:
    """Bagging of Gini decision trees grown to purity.

    ``features_per_split`` defaults to floor(sqrt(m)).  Per-tree random
    streams are spawned from the master seed, so forests are reproducible
    and trees are independent.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    y = (y > 0).astype(np.int64) if y.dtype != np.int64 else y
    if len(np.unique(y)) < 2:
        raise SingleClass("training labels contain a single class")
    n, m = X.shape
    p = features_per_split if features_per_split is not None else max(1, int(math.isqrt(m)))

    seeds = np.random.SeedSequence(seed).spawn(n_trees)
    trees = []
    importance_sum = np.zeros(m)
    for t in range(n_trees):
        rng = np.random.default_rng(seeds[t])
        idx = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        importance = np.zeros(m)
        trees.append(_grow_tree(X, y, np.asarray(idx), p, rng, importance, len(idx)))
        total = importance.sum()
        if total > 0:
            importance_sum += importance / total
    importances = importance_sum / n_trees
    if importances.sum() > 0:
        importances = importances / importances.sum()
    return RfModel(trees, m, p, seed, feature_names or [], importances)


def predict_rf(model: RfModel, x) -> float | np.ndarray:
    """Fraction of trees voting citing; the class decision is the majority
    vote with ties broken toward non-citing (probability > 0.5)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        if x.shape[0] != model.n_features:
            raise DimensionMismatch(f"{x.shape[0]} != {model.n_features}")
        votes = sum(tree_predict(t, x) for t in model.trees)
        return votes / model.n_trees
    if x.shape[1] != model.n_features:
        raise DimensionMismatch(f"{x.shape[1]} != {model.n_features}")
    return np.array([predict_rf(model, row) for row in x])


def rf_decision(model: RfModel, x) -> bool | np.ndarray:
    p = predict_rf(model, x)
    return p > 0.5 if np.isscalar(p) else np.asarray(p) > 0.5


# ---------------------------------------------------------------------------
# Combined importance/direction report


@dataclass
class ImportanceReport:
    features: list[dict]  # name, importance, sign
    category_sums: dict[str, float]

    def to_json(self, path) -> None:
        import json

        with open(path, "w", encoding="utf-8") as fh:
            json.dump(
                {"features": self.features, "category_sums": self.category_sums},
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")

    def to_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["feature", "importance", "sign"])
            for row in self.features:
                writer.writerow([row["name"], row["importance"], row["sign"]])


def importance_report(
    rf: RfModel,
    enlr: EnlrModel,
    feature_names: list[str],
    category_map: dict[str, str] | list[str],
) -> ImportanceReport:
    """Feature importance from the forest, direction of influence from the
    logistic weights, plus per-category importance sums."""
    if rf.n_features != len(enlr.beta) or rf.n_features != len(feature_names):
        raise FeatureSpaceMismatch(
            f"rf has {rf.n_features} features, enlr {len(enlr.beta)}, names {len(feature_names)}"
        )
    if isinstance(category_map, list):
        if len(category_map) != len(feature_names):
            raise FeatureSpaceMismatch("category list length mismatch")
        categories = category_map
    else:
        categories = [category_map.get(name, "other") for name in feature_names]

    features = []
    sums: dict[str, float] = {}
    for name, cat, imp, w in zip(feature_names, categories, rf.importances, enlr.beta):
        sign = "+" if w > 0 else ("-" if w < 0 else "0")
        features.append({"name": name, "category": cat, "importance": float(imp), "sign": sign})
        sums[cat] = sums.get(cat, 0.0) + float(imp)
    features.sort(key=lambda r: -r["importance"])
    return ImportanceReport(features, sums)
