"""Six classical classifiers trained from scratch on Dataset tables."""

from __future__ import annotations

from ..dataset import Dataset
from ..errors import UsageError
from .base import Model, model_class_for
from .bayes import NaiveBayesModel
from .dtable import DecisionTableModel, DTableConfig
from .forest import ForestConfig, RandomForestModel
from .knn import KnnModel
from .tree import DecisionTreeModel, RandomTreeModel, TreeConfig, training_accuracy

#: benchmark row order for the base algorithms
BASE_ALGOS = ("bayes", "dtable", "dtree", "j48", "knn", "rforest", "rtree")


def train_base(algo: str, train: Dataset, seed: int = 0, *, k: int = 1,
               n_trees: int = 100, min_leaf: int = 2,
               max_depth: int | None = None) -> Model:
    """Train one of the base classifiers by benchmark name.

    The plain tree uses the gini criterion; the C4.5-flavoured row uses
    gain ratio. Seeds only matter for the seeded learners (forest, random
    tree, decision-table folds).
    """
    if algo == "bayes":
        return NaiveBayesModel.train(train)
    if algo == "dtable":
        return DecisionTableModel.train(train, DTableConfig(seed=seed))
    if algo == "dtree":
        return DecisionTreeModel.train(
            train, TreeConfig("gini", min_leaf, max_depth), kind="dtree")
    if algo == "j48":
        return DecisionTreeModel.train(
            train, TreeConfig("gain_ratio", min_leaf, max_depth), kind="j48")
    if algo == "knn":
        return KnnModel.train(train, k=k)
    if algo == "rforest":
        return RandomForestModel.train(train, ForestConfig(n_trees=n_trees, seed=seed))
    if algo == "rtree":
        return RandomTreeModel.train(train, ForestConfig(n_trees=1, bootstrap=False,
                                                         seed=seed))
    raise UsageError(f"unknown base algorithm {algo!r}")


__all__ = [
    "BASE_ALGOS", "DTableConfig", "DecisionTableModel", "DecisionTreeModel",
    "ForestConfig", "KnnModel", "Model", "NaiveBayesModel", "RandomForestModel",
    "RandomTreeModel", "TreeConfig", "model_class_for", "train_base",
    "training_accuracy",
]
