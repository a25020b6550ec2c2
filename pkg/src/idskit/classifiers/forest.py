"""Random forest: bagged random trees with soft (distribution-averaging) voting.

Per-tree seeds derive from (forest seed, tree index), so models are
bit-identical whether trees are grown sequentially or on a thread pool
(IDS_JOBS controls the pool size).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..dataset import Dataset
from ..util import n_jobs, rng_for
from .base import Model, register
from .tree import (TreeConfig, counts_to_proba, grow_tree, node_from_dict,
                   predict_counts, _warn_if_single_class)


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    features_per_split: int | None = None  # None -> ceil(sqrt(n_attrs))
    seed: int = 0
    bootstrap: bool = True
    hard_vote: bool = False

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ValueError("features_per_split must be >= 1")

    def resolved_features(self, n_attrs: int) -> int:
        m = self.features_per_split
        if m is None:
            m = math.ceil(math.sqrt(n_attrs))
        if m > n_attrs:
            raise ValueError(f"features_per_split {m} exceeds attribute count {n_attrs}")
        return m


@register
class RandomForestModel(Model):
    kinds = ("rforest",)

    def __init__(self, kind, schema, class_values, trees, config: ForestConfig):
        super().__init__(kind, schema, class_values)
        self.trees = trees
        self.config = config

    @classmethod
    def train(cls, train: Dataset, cfg: ForestConfig | None = None) -> "RandomForestModel":
        cfg = cfg or ForestConfig()
        _warn_if_single_class(train)
        m = cfg.resolved_features(train.n_attrs)
        tree_cfg = TreeConfig(criterion="info_gain")
        n = train.n_rows
        n_classes = len(train.class_values)

        def build(i: int):
            rng = rng_for(cfg.seed, i)
            if cfg.bootstrap:
                rows = rng.integers(0, n, size=n)
                X, y = train.X[rows], train.y[rows]
            else:
                X, y = train.X, train.y
            return grow_tree(X, y, train.schema, n_classes, tree_cfg,
                             rng=rng, features_per_split=m)

        jobs = n_jobs()
        if jobs > 1 and cfg.n_trees > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                trees = list(pool.map(build, range(cfg.n_trees)))
        else:
            trees = [build(i) for i in range(cfg.n_trees)]
        return cls("rforest", train.schema, train.class_values, trees, cfg)

    def predict_proba(self, X):
        X = self._check_rows(X)
        acc = np.zeros((X.shape[0], self.n_classes), dtype=np.float64)
        for root in self.trees:
            proba = counts_to_proba(predict_counts(root, X, self.n_classes))
            if self.config.hard_vote:
                votes = np.argmax(proba, axis=1)
                hard = np.zeros_like(proba)
                hard[np.arange(X.shape[0]), votes] = 1.0
                proba = hard
            acc += proba
        return acc / len(self.trees)

    def to_params(self):
        return {"n_trees": self.config.n_trees,
                "features_per_split": self.config.features_per_split,
                "seed": self.config.seed,
                "bootstrap": self.config.bootstrap,
                "hard_vote": self.config.hard_vote,
                "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_params(cls, kind, params, schema, class_values):
        cfg = ForestConfig(params["n_trees"], params["features_per_split"],
                           params["seed"], params["bootstrap"], params["hard_vote"])
        trees = [node_from_dict(t) for t in params["trees"]]
        return cls(kind, schema, class_values, trees, cfg)
