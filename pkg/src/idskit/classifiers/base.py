"""Trained-model interface, algorithm registry, and shared prediction rules."""

from __future__ import annotations

import numpy as np

from ..errors import ModelError

#: algorithm name -> model class, filled by @register on import
MODEL_CLASSES: dict[str, type] = {}


def register(cls):
    for kind in cls.kinds:
        MODEL_CLASSES[kind] = cls
    return cls


def model_class_for(kind: str):
    try:
        return MODEL_CLASSES[kind]
    except KeyError:
        raise ModelError(f"unknown model kind {kind!r}") from None


class Model:
    """A fitted classifier: immutable, safe for concurrent prediction.

    Subclasses implement predict_proba over a row matrix aligned to
    ``self.schema`` and a params dict round-trip for persistence.
    """

    kinds: tuple[str, ...] = ()

    def __init__(self, kind, schema, class_values):
        self.kind = kind
        self.schema = tuple(schema)
        self.class_values = tuple(class_values)

    @property
    def n_classes(self) -> int:
        return len(self.class_values)

    def _check_rows(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != len(self.schema):
            raise ModelError(
                f"row width {X.shape[1]} does not match model schema "
                f"({len(self.schema)} attributes)")
        return X

    def predict_proba(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict_class(self, X) -> np.ndarray:
        """Argmax of predict_proba; ties go to the lowest class index."""
        return np.argmax(self.predict_proba(X), axis=1)

    def to_params(self) -> dict:
        raise NotImplementedError

    @classmethod
    def from_params(cls, kind, params, schema, class_values) -> "Model":
        raise NotImplementedError
