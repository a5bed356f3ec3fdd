"""CART decision tree grown to purity unless capped.

Splits minimize the weighted child Gini impurity over midpoint thresholds.
Ties break to the lowest feature index, then the lowest threshold, so the
tree is a pure function of the training set. Building is iterative (an
explicit stack), which keeps deep trees off the Python recursion limit.
"""

import numpy as np

from ..base import derive_rng
from .base import BinaryClassifier

_LEAF = -1


def _best_split(X, y, rows, feature_ids):
    """(weighted_gini, feature, threshold, left_rows, right_rows) or None."""
    n = rows.size
    y_rows = y[rows]
    n_pos = int(y_rows.sum())
    best = None
    best_score = np.inf
    for f in feature_ids:
        x = X[rows, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        if xs[0] == xs[-1]:
            continue
        ys = y_rows[order]
        cum_pos = np.cumsum(ys)
        cut = np.flatnonzero(xs[1:] > xs[:-1])
        n_left = cut + 1.0
        pos_left = cum_pos[cut]
        n_right = n - n_left
        pos_right = n_pos - pos_left
        gini_left = 1.0 - (pos_left / n_left) ** 2 - ((n_left - pos_left) / n_left) ** 2
        gini_right = (
            1.0 - (pos_right / n_right) ** 2 - ((n_right - pos_right) / n_right) ** 2
        )
        weighted = (n_left * gini_left + n_right * gini_right) / n
        k = int(np.argmin(weighted))
        if weighted[k] < best_score:
            best_score = weighted[k]
            lo, hi = xs[cut[k]], xs[cut[k] + 1]
            threshold = (lo + hi) / 2.0
            if threshold >= hi:  # adjacent floats: keep the boundary strict
                threshold = lo
            best = (f, threshold, rows[order[: cut[k] + 1]], rows[order[cut[k] + 1 :]])
    if best is None:
        return None
    return (best_score, *best)


class DecisionTreeClassifier(BinaryClassifier):
    supports_probability = True

    def __init__(self, max_depth=None, min_samples_split=2, max_features=None, seed=0):
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.seed = seed

    def _feature_ids(self, p, rng):
        if self.max_features is None:
            return np.arange(p)
        if self.max_features == "sqrt":
            count = max(1, int(np.sqrt(p)))
        else:
            count = max(1, min(int(self.max_features), p))
        if count >= p:
            return np.arange(p)
        return np.sort(rng.choice(p, size=count, replace=False))

    def _fit(self, X, y):
        p = X.shape[1]
        rng = derive_rng(self.seed, "feature_subsets") if self.max_features else None
        feature = [0]
        threshold = [0.0]
        left = [0]
        right = [0]
        prob = [0.0]

        def new_node():
            feature.append(0)
            threshold.append(0.0)
            left.append(0)
            right.append(0)
            prob.append(0.0)
            return len(feature) - 1

        stack = [(np.arange(X.shape[0]), 0, 0)]
        while stack:
            rows, depth, nid = stack.pop()
            n = rows.size
            n_pos = int(y[rows].sum())
            at_cap = self.max_depth is not None and depth >= self.max_depth
            split = None
            if not at_cap and 0 < n_pos < n and n >= self.min_samples_split:
                feats = self._feature_ids(p, rng)
                split = _best_split(X, y, rows, feats)
                if split is None and feats.size < p:
                    # sampled features were constant here: look at the rest
                    rest = np.setdiff1d(np.arange(p), feats)
                    split = _best_split(X, y, rows, rest)
            if split is None:
                feature[nid] = _LEAF
                prob[nid] = n_pos / n
                continue
            _, f, thr, left_rows, right_rows = split
            feature[nid] = f
            threshold[nid] = thr
            left[nid] = lid = new_node()
            right[nid] = rid = new_node()
            # left pushed last so it is processed first: stable node numbering
            stack.append((right_rows, depth + 1, rid))
            stack.append((left_rows, depth + 1, lid))

        self.feature_ = np.asarray(feature, dtype=np.int64)
        self.threshold_ = np.asarray(threshold)
        self.left_ = np.asarray(left, dtype=np.int64)
        self.right_ = np.asarray(right, dtype=np.int64)
        self.prob_ = np.asarray(prob)

    def _leaf_ids(self, X):
        idx = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            feats = self.feature_[idx]
            active = np.flatnonzero(feats != _LEAF)
            if active.size == 0:
                return idx
            node = idx[active]
            goes_left = (
                X[active, self.feature_[node]] <= self.threshold_[node]
            )
            idx[active] = np.where(goes_left, self.left_[node], self.right_[node])

    def _score(self, X):
        return self.prob_[self._leaf_ids(X)]

    @property
    def node_count(self):
        return self.feature_.shape[0]
