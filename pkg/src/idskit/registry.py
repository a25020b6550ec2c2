"""Single dispatch point for training any benchmark algorithm by name."""

from __future__ import annotations

from .classifiers import BASE_ALGOS, train_base
from .classifiers.base import Model
from .dataset import Dataset
from .ensemble import StackingConfig, train_stacking
from .errors import UsageError

#: benchmark table order: the seven base rows, then the hybrid
ALGO_ORDER = (*BASE_ALGOS, "hybrid")


def train_any(algo: str, train: Dataset, seed: int = 0, *, k: int = 1,
              n_trees: int = 100, folds: int = 5) -> Model:
    if algo == "hybrid":
        return train_stacking(train, StackingConfig(folds=folds, seed=seed))
    if algo in BASE_ALGOS:
        return train_base(algo, train, seed=seed, k=k, n_trees=n_trees)
    raise UsageError(f"unknown algorithm {algo!r}")
