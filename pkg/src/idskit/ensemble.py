"""Stacking hybrid: tree + forest base learners under a tree meta-classifier.

Phase one trains every base learner on the complete training set. Phase
two trains the meta learner on out-of-fold base predictions: a seeded
stratified k-fold split where each base model scores only the rows it
never saw, which keeps the meta features leakage-free. Meta features are
the concatenated class-probability vectors, base-major then class order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classifiers import BASE_ALGOS, train_base
from .classifiers.base import Model, model_class_for, register
from .dataset import AttributeSchema, Dataset, NUMERIC
from .errors import DataError, UsageError
from .util import child_seed, stratified_fold_ids

_FOLD_TAG = 0x57AC
_FULL_TAG = 0xF011
_META_TAG = 0x3E7A


@dataclass(frozen=True)
class StackingConfig:
    base_learners: tuple[str, ...] = ("dtree", "rforest")
    meta_learner: str = "dtree"
    folds: int = 5
    seed: int = 0

    def __post_init__(self):
        if not self.base_learners:
            raise ValueError("at least one base learner is required")
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        for name in (*self.base_learners, self.meta_learner):
            if name not in BASE_ALGOS:
                raise UsageError(f"unknown stacking learner {name!r}")


@dataclass
class MetaFeatures:
    """Out-of-fold meta dataset plus the fold bookkeeping that proves it."""

    dataset: Dataset
    fold_ids: np.ndarray
    fold_train_rows: list[np.ndarray] = field(default_factory=list)
    fold_scored_rows: list[np.ndarray] = field(default_factory=list)


def _meta_schema(base_learners, class_values) -> tuple[AttributeSchema, ...]:
    return tuple(
        AttributeSchema(f"b{i}_{algo}_p{c}", NUMERIC)
        for i, algo in enumerate(base_learners)
        for c in range(len(class_values))
    )


def _effective_folds(train: Dataset, cfg: StackingConfig) -> int:
    counts = train.class_counts()
    present = counts[counts > 0]
    if present.size < 2:
        raise DataError("stacking needs at least two classes present")
    smallest = int(present.min())
    if smallest < 2:
        raise DataError(
            f"class with {smallest} row(s): need >= 2 per class for out-of-fold "
            "meta-feature generation")
    return min(cfg.folds, smallest)


def generate_meta_features(train: Dataset, cfg: StackingConfig | None = None) -> MetaFeatures:
    """Out-of-fold base-learner probabilities for every training row.

    Folds shrink to the smallest per-class row count when necessary so the
    stratified split stays feasible.
    """
    cfg = cfg or StackingConfig()
    folds = _effective_folds(train, cfg)
    n_classes = len(train.class_values)
    fold_ids = stratified_fold_ids(train.y, n_classes, folds, cfg.seed, _FOLD_TAG)

    n_meta = len(cfg.base_learners) * n_classes
    meta_X = np.zeros((train.n_rows, n_meta), dtype=np.float64)
    fold_train_rows, fold_scored_rows = [], []
    for f in range(folds):
        heldout = np.flatnonzero(fold_ids == f)
        rest = np.flatnonzero(fold_ids != f)
        fold_train_rows.append(rest)
        fold_scored_rows.append(heldout)
        part = train.take(rest)
        for b, algo in enumerate(cfg.base_learners):
            model = train_base(algo, part, seed=child_seed(cfg.seed, f, b))
            proba = model.predict_proba(train.X[heldout])
            meta_X[heldout, b * n_classes:(b + 1) * n_classes] = proba

    meta = Dataset(_meta_schema(cfg.base_learners, train.class_values),
                   train.class_values, meta_X, train.y, source_tag="generic")
    return MetaFeatures(meta, fold_ids, fold_train_rows, fold_scored_rows)


@register
class StackingModel(Model):
    kinds = ("hybrid",)

    def __init__(self, kind, schema, class_values, base_learners, bases,
                 meta_model, config: StackingConfig):
        super().__init__(kind, schema, class_values)
        self.base_learners = tuple(base_learners)
        self.bases = list(bases)
        self.meta_model = meta_model
        self.config = config

    @classmethod
    def train(cls, train: Dataset, cfg: StackingConfig | None = None) -> "StackingModel":
        cfg = cfg or StackingConfig()
        meta_features = generate_meta_features(train, cfg)
        bases = [train_base(algo, train, seed=child_seed(cfg.seed, _FULL_TAG, b))
                 for b, algo in enumerate(cfg.base_learners)]
        meta_model = train_base(cfg.meta_learner, meta_features.dataset,
                                seed=child_seed(cfg.seed, _META_TAG))
        return cls("hybrid", train.schema, train.class_values, cfg.base_learners,
                   bases, meta_model, cfg)

    def meta_vector(self, X: np.ndarray) -> np.ndarray:
        X = self._check_rows(X)
        return np.hstack([b.predict_proba(X) for b in self.bases])

    def predict_proba(self, X):
        return self.meta_model.predict_proba(self.meta_vector(X))

    def to_params(self):
        return {"base_learners": list(self.base_learners),
                "folds": self.config.folds,
                "seed": self.config.seed,
                "meta_learner": self.config.meta_learner,
                "bases": [{"kind": b.kind, "params": b.to_params()} for b in self.bases],
                "meta": {"kind": self.meta_model.kind,
                         "params": self.meta_model.to_params()}}

    @classmethod
    def from_params(cls, kind, params, schema, class_values):
        cfg = StackingConfig(tuple(params["base_learners"]), params["meta_learner"],
                             params["folds"], params["seed"])
        bases = [
            model_class_for(doc["kind"]).from_params(doc["kind"], doc["params"],
                                                     schema, class_values)
            for doc in params["bases"]
        ]
        meta_schema = _meta_schema(cfg.base_learners, class_values)
        doc = params["meta"]
        meta_model = model_class_for(doc["kind"]).from_params(
            doc["kind"], doc["params"], meta_schema, class_values)
        return cls(kind, schema, class_values, cfg.base_learners, bases,
                   meta_model, cfg)


def train_stacking(train: Dataset, cfg: StackingConfig | None = None) -> StackingModel:
    return StackingModel.train(train, cfg)
