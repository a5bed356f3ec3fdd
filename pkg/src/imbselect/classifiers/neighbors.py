"""Exact brute-force k-nearest-neighbour voting.

Distances are computed in test-row chunks against the full training set;
equal distances resolve to the lower training-row index, making the
neighbour set fully deterministic.
"""

import numpy as np

from .base import BinaryClassifier


class KNeighborsClassifier(BinaryClassifier):
    supports_probability = True

    def __init__(self, k=5, chunk_rows=256):
        self.k = k
        self.chunk_rows = chunk_rows

    def _fit(self, X, y):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        self._train_X = X
        self._train_y = y
        self._train_sq = (X * X).sum(axis=1)

    def _score(self, X):
        k = min(self.k, self._train_X.shape[0])
        out = np.empty(X.shape[0])
        for start in range(0, X.shape[0], self.chunk_rows):
            chunk = X[start : start + self.chunk_rows]
            d2 = (
                (chunk * chunk).sum(axis=1)[:, None]
                - 2.0 * (chunk @ self._train_X.T)
                + self._train_sq[None, :]
            )
            if k == self._train_X.shape[0]:
                votes = np.repeat(self._train_y.mean(), chunk.shape[0])
            else:
                kth = np.partition(d2, k - 1, axis=1)[:, k - 1]
                votes = np.empty(chunk.shape[0])
                for i in range(chunk.shape[0]):
                    inner = np.flatnonzero(d2[i] < kth[i])
                    need = k - inner.size
                    boundary = np.flatnonzero(d2[i] == kth[i])[:need]
                    neighbors = np.concatenate([inner, boundary])
                    votes[i] = self._train_y[neighbors].mean()
            out[start : start + chunk.shape[0]] = votes
        return out
