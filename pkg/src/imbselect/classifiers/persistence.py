"""Versioned model persistence.

A saved model is a pickle of an envelope dict: format version, package
version, the estimator class name, its hyperparameters and its fitted
state. Loading refuses unknown format versions instead of guessing.
"""

import pickle

from .. import __version__ as package_version

FORMAT_VERSION = 1


def save_model(model, path):
    if not hasattr(model, "n_features_in_"):
        raise ValueError("refusing to save an unfitted model")
    envelope = {
        "format_version": FORMAT_VERSION,
        "package_version": package_version,
        "class_name": type(model).__name__,
        "params": model.get_params(),
        "state": model.__dict__,
    }
    with open(path, "wb") as handle:
        pickle.dump(envelope, handle, protocol=pickle.HIGHEST_PROTOCOL)
    return path


def load_model(path):
    with open(path, "rb") as handle:
        envelope = pickle.load(handle)
    version = envelope.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(
            f"unsupported model format version {version!r}; expected {FORMAT_VERSION}"
        )
    from . import CLASSIFIER_REGISTRY

    by_name = {cls.__name__: cls for cls in CLASSIFIER_REGISTRY.values()}
    cls = by_name.get(envelope["class_name"])
    if cls is None:
        raise ValueError(f"unknown model class {envelope['class_name']!r}")
    model = cls.__new__(cls)
    model.__dict__.update(envelope["state"])
    return model
