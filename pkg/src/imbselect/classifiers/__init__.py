"""Classifier roster behind a declarative spec.

``ClassifierSpec`` names a kind plus hyperparameter overrides; the
registry turns it into a fresh estimator. New kinds (heavier models, a
plugged-in library wrapper) register themselves without touching the
search machinery.
"""

from dataclasses import dataclass, field

from ..base import derive_seed
from .base import BinaryClassifier
from .boosting import DiscreteAdaBoost, RealAdaBoost
from .dummy import ConstantPositive
from .forest import RandomForestClassifier
from .gaussian import GaussianNaiveBayes, QuadraticDiscriminant
from .linear import (
    HingeSGD,
    LogisticRegression,
    PassiveAggressive,
    Perceptron,
    RidgeClassifier,
)
from .neighbors import KNeighborsClassifier
from .tree import DecisionTreeClassifier

CLASSIFIER_REGISTRY = {
    "dummy": ConstantPositive,
    "logistic_regression": LogisticRegression,
    "gaussian_nb": GaussianNaiveBayes,
    "decision_tree": DecisionTreeClassifier,
    "random_forest": RandomForestClassifier,
    "knn": KNeighborsClassifier,
    "perceptron": Perceptron,
    "ridge": RidgeClassifier,
    "sgd_hinge": HingeSGD,
    "passive_aggressive": PassiveAggressive,
    "adaboost_discrete": DiscreteAdaBoost,
    "adaboost_real": RealAdaBoost,
    "quadratic_da": QuadraticDiscriminant,
}

_SEEDED_KINDS = frozenset(
    {"decision_tree", "random_forest", "perceptron", "sgd_hinge", "passive_aggressive"}
)


def register_classifier(kind, cls, seeded=False):
    """Plug in an additional classifier kind."""
    if not issubclass(cls, BinaryClassifier):
        raise TypeError(f"{cls!r} must subclass BinaryClassifier")
    CLASSIFIER_REGISTRY[kind] = cls
    if seeded:
        global _SEEDED_KINDS
        _SEEDED_KINDS = _SEEDED_KINDS | {kind}


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed_salt: int = 0

    def __post_init__(self):
        if self.kind not in CLASSIFIER_REGISTRY:
            raise ValueError(
                f"unknown classifier kind {self.kind!r}; "
                f"known kinds: {sorted(CLASSIFIER_REGISTRY)}"
            )

    @property
    def label(self):
        if not self.params:
            return self.kind
        inner = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
        return f"{self.kind}({inner})"


def make_classifier(spec, seed=0):
    """Fresh unfitted estimator for a ClassifierSpec, with a derived seed."""
    cls = CLASSIFIER_REGISTRY[spec.kind]
    params = dict(spec.params)
    if spec.kind in _SEEDED_KINDS and "seed" not in params:
        params["seed"] = derive_seed(seed, spec.seed_salt, spec.kind)
    return cls(**params)


def train(spec, X, y, seed=0):
    """Build and fit in one step; the model records its own train time."""
    return make_classifier(spec, seed).fit(X, y)
