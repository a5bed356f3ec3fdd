"""Training-set rebalancing: two undersamplers, three oversamplers.

Samplers expose ``fit_resample(X, y)`` and only ever see the training
split; the natural test distribution is preserved by construction.
Undersamplers return exact row subsets (a multiset when sampling with
replacement), oversamplers append to the original rows, and all synthetic
minority points lie on segments between minority neighbours.

``target_ratio`` is the desired minority/majority count ratio after
resampling; 1.0 means full balance.
"""

from dataclasses import dataclass

import numpy as np

from .base import BaseEstimator, derive_rng, derive_seed
from .classifiers.forest import RandomForestClassifier
from .dataset import Dataset, stratified_folds
from .validation import check_X_y, require_both_classes

SAMPLER_KINDS = (
    "none",
    "random_under",
    "instance_hardness_threshold",
    "random_over",
    "smote",
    "adasyn",
)


@dataclass(frozen=True)
class SamplerSpec:
    kind: str
    target_ratio: float = 1.0
    k_neighbors: int = 5
    with_replacement: bool = False
    iht_folds: int = 5
    seed_salt: int = 0

    def __post_init__(self):
        if self.kind not in SAMPLER_KINDS:
            raise ValueError(
                f"unknown sampler kind {self.kind!r}; known kinds: {SAMPLER_KINDS}"
            )
        if not 0.0 < self.target_ratio <= 1.0:
            raise ValueError(f"target_ratio must be in (0, 1], got {self.target_ratio}")
        if self.k_neighbors < 1:
            raise ValueError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if self.iht_folds < 2:
            raise ValueError(f"iht_folds must be >= 2, got {self.iht_folds}")

    @property
    def label(self):
        if self.kind == "none":
            return "none"
        parts = [f"ratio={self.target_ratio:g}"]
        if self.kind in ("smote", "adasyn"):
            parts.append(f"k={self.k_neighbors}")
        if self.kind == "random_under" and self.with_replacement:
            parts.append("replacement")
        return f"{self.kind}({','.join(parts)})"


def _round_half_away(x):
    return int(np.floor(x + 0.5))


def _class_indices(y):
    return np.flatnonzero(y == 1), np.flatnonzero(y == 0)


def _undersample_keep_count(n_pos, n_neg, target_ratio):
    keep = _round_half_away(n_pos / target_ratio)
    if keep > n_neg:
        raise ValueError(
            f"target_ratio {target_ratio} is below the current class ratio "
            f"{n_pos}/{n_neg}; undersampling cannot reach it"
        )
    return keep


def _oversample_new_count(n_pos, n_neg, target_ratio):
    new = _round_half_away(n_neg * target_ratio) - n_pos
    if new < 0:
        raise ValueError(
            f"target_ratio {target_ratio} is below the current class ratio "
            f"{n_pos}/{n_neg}; oversampling cannot reach it"
        )
    return new


def _minority_neighbor_table(minority, k):
    """k nearest minority neighbours per minority row, self excluded,
    distance ties broken by the lower row index."""
    n = minority.shape[0]
    if k >= n:
        raise ValueError(f"k_neighbors={k} must be below the minority count {n}")
    sq = (minority * minority).sum(axis=1)
    d2 = sq[:, None] - 2.0 * (minority @ minority.T) + sq[None, :]
    np.fill_diagonal(d2, np.inf)
    order = np.argsort(d2, axis=1, kind="stable")
    return order[:, :k]


class IdentitySampler(BaseEstimator):
    kind = "none"

    def fit_resample(self, X, y):
        return X, y


class RandomUnderSampler(BaseEstimator):
    kind = "random_under"

    def __init__(self, target_ratio=1.0, with_replacement=False, seed=0):
        self.target_ratio = target_ratio
        self.with_replacement = with_replacement
        self.seed = seed

    def fit_resample(self, X, y):
        X, y = check_X_y(X, y)
        require_both_classes(y, "resampling")
        pos_idx, neg_idx = _class_indices(y)
        keep = _undersample_keep_count(len(pos_idx), len(neg_idx), self.target_ratio)
        rng = derive_rng(self.seed, "random_under")
        chosen = rng.choice(neg_idx, size=keep, replace=self.with_replacement)
        kept = np.sort(np.concatenate([pos_idx, chosen]))
        return X[kept], y[kept]


class InstanceHardnessThreshold(BaseEstimator):
    """Keep the majority rows whose true class is easiest to predict.

    Hardness comes from out-of-fold class probabilities of an internal
    forest (50 leaf-averaging trees, depth cap 10) over a stratified CV of
    the training split. Minority rows are always kept.
    """

    kind = "instance_hardness_threshold"

    def __init__(self, target_ratio=1.0, n_folds=5, seed=0):
        self.target_ratio = target_ratio
        self.n_folds = n_folds
        self.seed = seed

    def _out_of_fold_true_class_probability(self, X, y):
        folds = stratified_folds(y, self.n_folds, seed=derive_seed(self.seed, "iht_folds"))
        proba_true = np.empty(X.shape[0])
        for f in range(self.n_folds):
            held = folds == f
            model = RandomForestClassifier(
                n_trees=50,
                max_depth=10,
                probability_mode="leaf_mean",
                seed=derive_seed(self.seed, "iht_forest", f),
            ).fit(X[~held], y[~held])
            p1 = model.predict_score(X[held])
            proba_true[held] = np.where(y[held] == 1, p1, 1.0 - p1)
        return proba_true

    def fit_resample(self, X, y):
        X, y = check_X_y(X, y)
        require_both_classes(y, "resampling")
        pos_idx, neg_idx = _class_indices(y)
        keep = _undersample_keep_count(len(pos_idx), len(neg_idx), self.target_ratio)
        if keep >= len(neg_idx):
            raise ValueError(
                f"instance hardness threshold needs majority count ({len(neg_idx)}) "
                f"above the retained count ({keep})"
            )
        proba_true = self._out_of_fold_true_class_probability(X, y)
        order = np.argsort(-proba_true[neg_idx], kind="stable")  # ties: lower index
        kept = np.sort(np.concatenate([pos_idx, neg_idx[order[:keep]]]))
        self.true_class_probability_ = proba_true
        return X[kept], y[kept]


class RandomOverSampler(BaseEstimator):
    kind = "random_over"

    def __init__(self, target_ratio=1.0, seed=0):
        self.target_ratio = target_ratio
        self.seed = seed

    def fit_resample(self, X, y):
        X, y = check_X_y(X, y)
        require_both_classes(y, "resampling")
        pos_idx, neg_idx = _class_indices(y)
        new = _oversample_new_count(len(pos_idx), len(neg_idx), self.target_ratio)
        rng = derive_rng(self.seed, "random_over")
        extra = rng.choice(pos_idx, size=new, replace=True)
        return np.vstack([X, X[extra]]), np.concatenate([y, y[extra]])


def smote_synthesize(minority, k_neighbors, count, rng):
    """``count`` synthetic rows, each on the segment from a random base
    minority point to one of its k nearest minority neighbours."""
    minority = np.asarray(minority, dtype=np.float64)
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    if count == 0:
        return np.empty((0, minority.shape[1]))
    neighbors = _minority_neighbor_table(minority, k_neighbors)
    base = rng.integers(0, minority.shape[0], size=count)
    pick = rng.integers(0, k_neighbors, size=count)
    gaps = rng.random(count)
    partners = neighbors[base, pick]
    return minority[base] + gaps[:, None] * (minority[partners] - minority[base])


class Smote(BaseEstimator):
    kind = "smote"

    def __init__(self, target_ratio=1.0, k_neighbors=5, seed=0):
        self.target_ratio = target_ratio
        self.k_neighbors = k_neighbors
        self.seed = seed

    def fit_resample(self, X, y):
        X, y = check_X_y(X, y)
        require_both_classes(y, "resampling")
        pos_idx, neg_idx = _class_indices(y)
        new = _oversample_new_count(len(pos_idx), len(neg_idx), self.target_ratio)
        rng = derive_rng(self.seed, "smote")
        synthetic = smote_synthesize(X[pos_idx], self.k_neighbors, new, rng)
        return (
            np.vstack([X, synthetic]),
            np.concatenate([y, np.ones(len(synthetic), dtype=y.dtype)]),
        )


def adasyn_generation_counts(hardness, total):
    """Per-point synthetic counts proportional to hardness, summing to
    ``total`` exactly (largest-remainder apportionment, ties to the lower
    index). Zero hardness everywhere falls back to uniform weights."""
    hardness = np.asarray(hardness, dtype=np.float64)
    if total == 0:
        return np.zeros(len(hardness), dtype=np.int64), False
    fallback = False
    if hardness.sum() == 0.0:
        hardness = np.ones_like(hardness)
        fallback = True
    weights = hardness / hardness.sum()
    raw = weights * total
    counts = np.floor(raw).astype(np.int64)
    short = total - int(counts.sum())
    if short > 0:
        remainder_order = np.argsort(-(raw - counts), kind="stable")
        counts[remainder_order[:short]] += 1
    return counts, fallback


class Adasyn(BaseEstimator):
    """SMOTE-style interpolation with density-adaptive allocation: minority
    points surrounded by majority neighbours receive more synthetics."""

    kind = "adasyn"

    def __init__(self, target_ratio=1.0, k_neighbors=5, seed=0):
        self.target_ratio = target_ratio
        self.k_neighbors = k_neighbors
        self.seed = seed

    def _hardness(self, X, y, pos_idx):
        k = self.k_neighbors
        if k >= X.shape[0]:
            raise ValueError(
                f"k_neighbors={k} must be below the training-set size {X.shape[0]}"
            )
        sq = (X * X).sum(axis=1)
        minority = X[pos_idx]
        d2 = (
            (minority * minority).sum(axis=1)[:, None]
            - 2.0 * (minority @ X.T)
            + sq[None, :]
        )
        d2[np.arange(len(pos_idx)), pos_idx] = np.inf  # self
        order = np.argsort(d2, axis=1, kind="stable")[:, :k]
        return (y[order] == 0).mean(axis=1)

    def fit_resample(self, X, y):
        X, y = check_X_y(X, y)
        require_both_classes(y, "resampling")
        pos_idx, neg_idx = _class_indices(y)
        total = _oversample_new_count(len(pos_idx), len(neg_idx), self.target_ratio)
        counts, self.uniform_fallback_ = adasyn_generation_counts(
            self._hardness(X, y, pos_idx), total
        )
        minority = X[pos_idx]
        neighbors = _minority_neighbor_table(minority, self.k_neighbors)
        rng = derive_rng(self.seed, "adasyn")
        pieces = []
        for i in range(len(pos_idx)):
            if counts[i] == 0:
                continue
            pick = rng.integers(0, self.k_neighbors, size=counts[i])
            gaps = rng.random(counts[i])
            partners = neighbors[i, pick]
            pieces.append(
                minority[i] + gaps[:, None] * (minority[partners] - minority[i])
            )
        synthetic = np.vstack(pieces) if pieces else np.empty((0, X.shape[1]))
        return (
            np.vstack([X, synthetic]),
            np.concatenate([y, np.ones(len(synthetic), dtype=y.dtype)]),
        )


def make_sampler(spec, seed=0):
    derived = derive_seed(seed, spec.seed_salt, spec.kind)
    if spec.kind == "none":
        return IdentitySampler()
    if spec.kind == "random_under":
        return RandomUnderSampler(
            target_ratio=spec.target_ratio,
            with_replacement=spec.with_replacement,
            seed=derived,
        )
    if spec.kind == "instance_hardness_threshold":
        return InstanceHardnessThreshold(
            target_ratio=spec.target_ratio, n_folds=spec.iht_folds, seed=derived
        )
    if spec.kind == "random_over":
        return RandomOverSampler(target_ratio=spec.target_ratio, seed=derived)
    if spec.kind == "smote":
        return Smote(
            target_ratio=spec.target_ratio, k_neighbors=spec.k_neighbors, seed=derived
        )
    if spec.kind == "adasyn":
        return Adasyn(
            target_ratio=spec.target_ratio, k_neighbors=spec.k_neighbors, seed=derived
        )
    raise ValueError(f"unknown sampler kind {spec.kind!r}")


def resample(spec, train, seed=0):
    """Dataset-level rebalancing; ``kind='none'`` returns the input as is."""
    if spec.kind == "none":
        return train
    sampler = make_sampler(spec, seed)
    X, y = sampler.fit_resample(train.features, train.labels)
    return Dataset(
        features=X,
        labels=y,
        feature_names=train.feature_names,
        source_tag=train.source_tag,
    )
