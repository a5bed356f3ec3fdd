"""Input validation helpers used across estimators."""

import numpy as np


def check_array(X, name="X"):
    """Coerce to a 2-D float64 array and reject non-finite values."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.size and not np.isfinite(arr).all():
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_labels(y, name="y"):
    """Coerce to a 1-D integer vector with values in {0, 1}."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if arr.size and not np.isin(arr, (0, 1)).all():
        bad = arr[~np.isin(arr, (0, 1))][0]
        raise ValueError(f"{name} must contain only 0 and 1, found {bad!r}")
    return arr.astype(np.int64)


def check_X_y(X, y):
    X = check_array(X)
    y = check_labels(y)
    if X.shape[0] != y.shape[0]:
        raise ValueError(
            f"X and y have inconsistent lengths: {X.shape[0]} rows vs {y.shape[0]} labels"
        )
    return X, y


def check_feature_width(X, expected, name="X"):
    if X.shape[1] != expected:
        raise ValueError(
            f"{name} has {X.shape[1]} features, expected {expected}"
        )


def require_both_classes(y, context="training"):
    if not ((y == 0).any() and (y == 1).any()):
        raise ValueError(f"{context} requires at least one sample of each class")
