"""Linear models: logistic regression, ridge, and the online family
(perceptron, hinge SGD, passive-aggressive).

Margin models score with the raw signed margin; only logistic regression
is probabilistic here.
"""

import numpy as np

from ..base import derive_rng
from .base import BinaryClassifier


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss(w, b, X, y, l2):
    """Mean log-loss plus l2/2 * ||w||^2 (bias unregularized)."""
    margins = (X @ w + b) * (2.0 * y - 1.0)
    return float(np.logaddexp(0.0, -margins).mean() + 0.5 * l2 * (w @ w))


def logistic_gradient(w, b, X, y, l2):
    residual = _sigmoid(X @ w + b) - y
    grad_w = X.T @ residual / X.shape[0] + l2 * w
    grad_b = float(residual.mean())
    return grad_w, grad_b


class LogisticRegression(BinaryClassifier):
    """Full-batch gradient descent with Armijo backtracking line search."""

    supports_probability = True

    def __init__(self, l2=1e-4, max_epochs=500, tol=1e-8):
        self.l2 = l2
        self.max_epochs = max_epochs
        self.tol = tol

    def _fit(self, X, y):
        if self.l2 < 0 or self.max_epochs < 1:
            raise ValueError("l2 must be >= 0 and max_epochs >= 1")
        y = y.astype(np.float64)
        w = np.zeros(X.shape[1])
        b = 0.0
        loss = logistic_loss(w, b, X, y, self.l2)
        step = 1.0
        for _ in range(self.max_epochs):
            grad_w, grad_b = logistic_gradient(w, b, X, y, self.l2)
            grad_sq = float(grad_w @ grad_w) + grad_b * grad_b
            if grad_sq == 0.0:
                break
            step = min(step * 2.0, 1e6)
            while step > 1e-16:
                new_w = w - step * grad_w
                new_b = b - step * grad_b
                new_loss = logistic_loss(new_w, new_b, X, y, self.l2)
                if new_loss <= loss - 1e-4 * step * grad_sq:
                    break
                step *= 0.5
            else:
                break
            w, b = new_w, new_b
            if abs(loss - new_loss) < self.tol:
                loss = new_loss
                break
            loss = new_loss
        self.coef_ = w
        self.intercept_ = b

    def _score(self, X):
        return _sigmoid(X @ self.coef_ + self.intercept_)


class RidgeClassifier(BinaryClassifier):
    """Closed-form least squares on +-1 targets, unpenalized intercept."""

    def __init__(self, l2=1.0):
        self.l2 = l2

    def _fit(self, X, y):
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")
        targets = 2.0 * y - 1.0
        x_mean = X.mean(axis=0)
        t_mean = targets.mean()
        Xc = X - x_mean
        gram = Xc.T @ Xc + self.l2 * np.eye(X.shape[1])
        rhs = Xc.T @ (targets - t_mean)
        jitter = 1e-10 * max(np.trace(gram) / X.shape[1], 1.0)
        for attempt in range(6):
            try:
                chol = np.linalg.cholesky(gram)
                break
            except np.linalg.LinAlgError:
                self.fit_flags_.add("ridge_jitter")
                gram = gram + jitter * np.eye(X.shape[1])
                jitter *= 100.0
        else:
            raise np.linalg.LinAlgError("ridge system not positive definite")
        w = np.linalg.solve(chol.T, np.linalg.solve(chol, rhs))
        self.coef_ = w
        self.intercept_ = float(t_mean - x_mean @ w)

    def _score(self, X):
        return X @ self.coef_ + self.intercept_


class Perceptron(BinaryClassifier):
    """Rosenblatt updates over seeded per-epoch shuffles."""

    def __init__(self, epochs=50, learning_rate=1.0, seed=0):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.seed = seed

    def _fit(self, X, y):
        if self.epochs < 1 or self.learning_rate <= 0:
            raise ValueError("epochs must be >= 1 and learning_rate > 0")
        signs = 2.0 * y - 1.0
        w = np.zeros(X.shape[1])
        b = 0.0
        n = X.shape[0]
        for epoch in range(self.epochs):
            order = derive_rng(self.seed, "shuffle", epoch).permutation(n)
            mistakes = 0
            for i in order:
                if signs[i] * (X[i] @ w + b) <= 0.0:
                    w += self.learning_rate * signs[i] * X[i]
                    b += self.learning_rate * signs[i]
                    mistakes += 1
            if mistakes == 0:
                break
        self.coef_ = w
        self.intercept_ = b

    def _score(self, X):
        return X @ self.coef_ + self.intercept_


class HingeSGD(BinaryClassifier):
    """Linear SVM objective by SGD: hinge loss with l2 shrinkage."""

    def __init__(self, l2=1e-4, epochs=50, eta0=0.01, seed=0):
        self.l2 = l2
        self.epochs = epochs
        self.eta0 = eta0
        self.seed = seed

    def _fit(self, X, y):
        if self.l2 <= 0 or self.eta0 <= 0 or self.epochs < 1:
            raise ValueError("l2 and eta0 must be > 0, epochs >= 1")
        signs = 2.0 * y - 1.0
        w = np.zeros(X.shape[1])
        b = 0.0
        n = X.shape[0]
        t0 = 1.0 / (self.l2 * self.eta0)
        t = 0
        for epoch in range(self.epochs):
            order = derive_rng(self.seed, "shuffle", epoch).permutation(n)
            for i in order:
                t += 1
                eta = 1.0 / (self.l2 * (t0 + t))
                w *= 1.0 - eta * self.l2
                if signs[i] * (X[i] @ w + b) < 1.0:
                    w += eta * signs[i] * X[i]
                    b += eta * signs[i]
        self.coef_ = w
        self.intercept_ = b

    def _score(self, X):
        return X @ self.coef_ + self.intercept_


class PassiveAggressive(BinaryClassifier):
    """PA-I: step size tau = min(C, hinge loss / ||x||^2), bias augmented."""

    def __init__(self, aggressiveness=1.0, epochs=50, seed=0):
        self.aggressiveness = aggressiveness
        self.epochs = epochs
        self.seed = seed

    def _fit(self, X, y):
        if self.aggressiveness <= 0 or self.epochs < 1:
            raise ValueError("aggressiveness must be > 0 and epochs >= 1")
        signs = 2.0 * y - 1.0
        w = np.zeros(X.shape[1])
        b = 0.0
        n = X.shape[0]
        sq_norms = (X * X).sum(axis=1) + 1.0  # +1 for the bias coordinate
        for epoch in range(self.epochs):
            order = derive_rng(self.seed, "shuffle", epoch).permutation(n)
            for i in order:
                loss = 1.0 - signs[i] * (X[i] @ w + b)
                if loss > 0.0:
                    tau = min(self.aggressiveness, loss / sq_norms[i])
                    w += tau * signs[i] * X[i]
                    b += tau * signs[i]
        self.coef_ = w
        self.intercept_ = b

    def _score(self, X):
        return X @ self.coef_ + self.intercept_
