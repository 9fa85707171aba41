"""Paradox-derived features, a reference logistic classifier and stratified CV."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np
from scipy.special import expit
from scipy.stats import rankdata

from . import _kernels
from .graph import ConnectionType, SocialGraph
from .paradox import SENTIMENT_KINDS, Contexts, Kind, as_values, build_contexts

TYPES = (ConnectionType.FRIENDS, ConnectionType.FOLLOWEES, ConnectionType.FOLLOWERS)
AGGS = ("mean", "median")
DEGREE_NAMES = {
    ConnectionType.FRIENDS: "degree",
    ConnectionType.FOLLOWEES: "out_degree",
    ConnectionType.FOLLOWERS: "in_degree",
}


def _group_name(kind: Kind) -> str:
    return kind.value.replace("-", "_")


SENTIMENT_GROUPS = tuple(_group_name(k) for k in SENTIMENT_KINDS)
GROUPS = SENTIMENT_GROUPS + ("friendship",)
COMPOSITES = ("all_sentiment", "all")


def feature_names() -> list[str]:
    names = [f"{_group_name(k)}_{t.value}_{a}" for k in SENTIMENT_KINDS for t in TYPES for a in AGGS]
    names += [DEGREE_NAMES[t] for t in TYPES]
    names += [f"{t.value}_{DEGREE_NAMES[t]}_{a}" for t in TYPES for a in AGGS]
    return names


FEATURE_NAMES = tuple(feature_names())


def group_columns(group: str) -> np.ndarray:
    if group == "all":
        return np.arange(len(FEATURE_NAMES))
    if group == "all_sentiment":
        return np.arange(30)
    if group == "friendship":
        return np.arange(30, 39)
    if group in SENTIMENT_GROUPS:
        i = SENTIMENT_GROUPS.index(group)
        return np.arange(6 * i, 6 * i + 6)
    raise ValueError(f"unknown feature group {group!r}")


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """One row per Positive/Negative user; NaN cells are missing."""

    users: np.ndarray  # dense graph indices
    ids: np.ndarray
    X: np.ndarray
    labels: np.ndarray  # 1 positive, 0 negative
    names: tuple[str, ...] = FEATURE_NAMES

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.X)

    def __len__(self):
        return len(self.labels)

    def columns(self, cols) -> "FeatureMatrix":
        cols = np.asarray(cols)
        return FeatureMatrix(self.users, self.ids, self.X[:, cols], self.labels, tuple(self.names[i] for i in cols))

    def rows(self, idx) -> "FeatureMatrix":
        return FeatureMatrix(self.users[idx], self.ids[idx], self.X[idx], self.labels[idx], self.names)

    def with_labels(self, labels) -> "FeatureMatrix":
        return FeatureMatrix(self.users, self.ids, self.X, np.asarray(labels), self.names)


def _pool_by_owner(ctx: Contexts) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Merge all units of an owner into one member multiset (owners are sorted)."""
    owner = np.repeat(ctx.owner, np.diff(ctx.indptr))
    change = np.r_[True, owner[1:] != owner[:-1]] if owner.size else np.zeros(0, bool)
    starts = np.flatnonzero(change)
    return owner[starts], np.r_[starts, owner.size].astype(np.int64), ctx.members


def _owner_aggregates(values, ctx: Contexts, n) -> tuple[np.ndarray, np.ndarray]:
    owners, indptr, members = _pool_by_owner(ctx)
    mean = np.full(n, np.nan)
    median = np.full(n, np.nan)
    for agg_out, is_median in ((mean, False), (median, True)):
        tmp = np.empty(len(owners))
        _kernels.segment_aggregate(values, members, indptr, is_median, tmp)
        agg_out[owners] = tmp
    return mean, median


def extract_features(g: SocialGraph, swb, communities) -> FeatureMatrix:
    """The 39 paradox features for every user with nonzero SWB.

    Triad and community features pool the member lists of all of a user's
    triads (communities), so a connection counts once per shared context.
    """
    values = as_values(swb)
    n = g.n_users
    defined = ~np.isnan(values)
    cols = []
    for kind in SENTIMENT_KINDS:
        for t in TYPES:
            if kind in (Kind.COMMUNITY, Kind.COMMON_INTEREST) and communities is None:
                cols += [np.full(n, np.nan)] * 2
                continue
            ctx = build_contexts(kind, g, t, defined, communities)
            cols += list(_owner_aggregates(values, ctx, n))
    everyone = np.ones(n, dtype=bool)
    for t in TYPES:
        cols.append(g.degree(t).astype(np.float64))
    for t in TYPES:
        deg = g.degree(t).astype(np.float64)
        cols += list(_owner_aggregates(deg, build_contexts(Kind.GENERAL, g, t, everyone), n))
    X = np.column_stack(cols) if n else np.zeros((0, len(FEATURE_NAMES)))
    rows = np.flatnonzero(defined & (np.nan_to_num(values) != 0))
    return FeatureMatrix(rows, g.ids[rows], X[rows], (values[rows] > 0).astype(np.int64))


class Classifier(Protocol):
    def fit(self, X: np.ndarray, y: np.ndarray) -> "Classifier": ...

    def predict_proba(self, X: np.ndarray) -> np.ndarray: ...


@dataclass
class LogisticRegression:
    """L2-regularized logistic regression fit by damped Newton iterations.

    The intercept is not penalized.  Stops when the largest coordinate
    update drops below ``tol`` or after ``max_iter`` iterations.
    """

    l2: float = 1e-3
    tol: float = 1e-6
    max_iter: int = 500
    coef_: np.ndarray | None = field(default=None, repr=False)
    intercept_: float = 0.0
    n_iter_: int = 0

    def _loss(self, X, y, w, b):
        z = X @ w + b
        return float(np.mean(np.logaddexp(0, z) - y * z) + 0.5 * self.l2 * (w @ w))

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        n, d = X.shape
        A = np.hstack([X, np.ones((n, 1))])
        theta = np.zeros(d + 1)
        reg = np.full(d + 1, self.l2)
        reg[-1] = 0.0
        loss = self._loss(X, y, theta[:-1], theta[-1])
        for it in range(1, self.max_iter + 1):
            p = expit(A @ theta)
            grad = A.T @ (p - y) / n + reg * theta
            H = (A * (p * (1 - p))[:, None]).T @ A / n + np.diag(reg)
            H[np.diag_indices_from(H)] += 1e-12
            step = np.linalg.solve(H, grad)
            t = 1.0
            while True:
                cand = theta - t * step
                new = self._loss(X, y, cand[:-1], cand[-1])
                if new <= loss + 1e-15 or t < 1e-8:
                    break
                t *= 0.5
            theta, loss = cand, new
            self.n_iter_ = it
            if np.max(np.abs(t * step)) < self.tol:
                break
        self.coef_, self.intercept_ = theta[:-1], float(theta[-1])
        return self

    def decision_function(self, X):
        return np.asarray(X, dtype=np.float64) @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        return expit(self.decision_function(X))


@dataclass
class TrainedModel:
    """Classifier plus the training-fold imputation and scaling statistics."""

    classifier: Classifier
    fill: np.ndarray
    center: np.ndarray
    scale: np.ndarray

    def transform(self, X):
        X = np.asarray(X, dtype=np.float64)
        X = np.where(np.isnan(X), self.fill, X)
        return (X - self.center) / self.scale

    def predict_proba(self, X) -> np.ndarray:
        return self.classifier.predict_proba(self.transform(X))


def train_classifier(train: FeatureMatrix, classifier: Callable[[], Classifier] = LogisticRegression) -> TrainedModel:
    y = np.asarray(train.labels)
    if len(np.unique(y)) < 2:
        raise ValueError("training set must contain both classes")
    X = np.asarray(train.X, dtype=np.float64)
    with warnings.catch_warnings():
        # all-missing columns impute to 0
        warnings.simplefilter("ignore", RuntimeWarning)
        fill = np.nan_to_num(np.nanmean(X, axis=0))
    Xf = np.where(np.isnan(X), fill, X)
    center = Xf.mean(axis=0)
    scale = Xf.std(axis=0)
    scale[scale == 0] = 1.0
    clf = classifier().fit((Xf - center) / scale, y)
    return TrainedModel(clf, fill, center, scale)


def auc(scores, labels) -> float:
    """Probability a positive outscores a negative, ties counted half."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes")
    ranks = rankdata(scores)
    return float((ranks[labels].sum() - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


@dataclass(frozen=True)
class FoldResult:
    accuracy: float
    auc: float
    n_correct: int
    n_test: int


@dataclass(frozen=True)
class EvalResult:
    accuracy: float
    auc: float
    per_fold: tuple[FoldResult, ...]
    folds: int
    seed: int


def stratified_folds(labels, folds: int, seed: int) -> np.ndarray:
    """Fold id per row; each class is dealt round-robin after a seeded shuffle."""
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    fold = np.empty(len(labels), dtype=np.int64)
    offset = 0
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if len(idx) < folds:
            raise ValueError(f"class {cls} has {len(idx)} rows, fewer than {folds} folds")
        idx = idx[rng.permutation(len(idx))]
        fold[idx] = (offset + np.arange(len(idx))) % folds
        offset = (offset + len(idx)) % folds
    return fold


def cross_validate(m: FeatureMatrix, folds: int = 10, seed: int = 0, classifier=LogisticRegression) -> EvalResult:
    fold = stratified_folds(m.labels, folds, seed)
    results = []
    for f in range(folds):
        test = fold == f
        model = train_classifier(m.rows(~test), classifier)
        p = model.predict_proba(m.X[test])
        y = m.labels[test]
        correct = int(np.sum((p >= 0.5) == (y == 1)))
        results.append(FoldResult(correct / len(y), auc(p, y), correct, int(len(y))))
    return EvalResult(
        float(np.mean([r.accuracy for r in results])),
        float(np.mean([r.auc for r in results])),
        tuple(results),
        folds,
        seed,
    )


def ablate_feature_groups(m: FeatureMatrix, groups=GROUPS, folds: int = 10, seed: int = 0, classifier=LogisticRegression):
    """CV per feature group, then the all-sentiment (30) and all (39) composites."""
    groups = list(groups)
    if not groups:
        raise ValueError("no feature groups given")
    for grp in groups:
        if grp not in GROUPS:
            raise ValueError(f"unknown feature group {grp!r}")
    out = {}
    for grp in groups + list(COMPOSITES):
        out[grp] = cross_validate(m.columns(group_columns(grp)), folds, seed, classifier)
    return out
