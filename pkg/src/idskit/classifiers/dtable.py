"""Decision table: a key-to-majority-class lookup over a searched attribute subset.

Attribute keys use nominal category indices directly and equal-frequency
bin indices for numeric attributes. The subset is chosen by forward
best-first search on seeded stratified cross-validation accuracy; keys not
seen in training fall back to the global majority class.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import Dataset, NOMINAL
from ..errors import DataError
from ..featsel import equal_frequency_cuts
from ..util import stratified_fold_ids
from .base import Model, register

_FOLD_TAG = 0xD7AB


@dataclass(frozen=True)
class DTableConfig:
    folds: int = 5
    bins: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        if self.bins < 2:
            raise ValueError("bins must be >= 2")


def _encode_columns(train: Dataset, bins: int):
    """Integer code per attribute column plus numeric cut points for reuse."""
    codes = np.empty((train.n_rows, train.n_attrs), dtype=np.int64)
    cuts = {}
    for j, attr in enumerate(train.schema):
        col = train.X[:, j]
        if attr.kind == NOMINAL:
            codes[:, j] = col.astype(np.int64)
        else:
            c = equal_frequency_cuts(col, bins)
            cuts[j] = c
            codes[:, j] = np.searchsorted(c, col, side="left")
    return codes, cuts


def _cv_accuracy(codes, y, subset, fold_ids, n_folds, n_classes) -> float:
    """Cross-validated accuracy of the table built on the given subset."""
    n = y.size
    if subset:
        _, key_ids = np.unique(codes[:, subset], axis=0, return_inverse=True)
        key_ids = key_ids.ravel().astype(np.int64)
    else:
        key_ids = np.zeros(n, dtype=np.int64)
    n_keys = int(key_ids.max()) + 1
    correct = 0
    for f in range(n_folds):
        test = fold_ids == f
        if not test.any():
            continue
        train = ~test
        joint = np.bincount(key_ids[train] * n_classes + y[train],
                            minlength=n_keys * n_classes).reshape(n_keys, n_classes)
        default = int(np.argmax(np.bincount(y[train], minlength=n_classes)))
        majority = np.argmax(joint, axis=1)
        seen = joint.sum(axis=1) > 0
        majority = np.where(seen, majority, default)
        pred = majority[key_ids[test]] if subset else np.full(test.sum(), default)
        correct += int((pred == y[test]).sum())
    return correct / n


@register
class DecisionTableModel(Model):
    kinds = ("dtable",)

    def __init__(self, kind, schema, class_values, attr_indices, cuts, table,
                 default_class, config: DTableConfig):
        super().__init__(kind, schema, class_values)
        self.attr_indices = list(attr_indices)
        self.cuts = {int(j): np.asarray(c, dtype=np.float64) for j, c in cuts.items()}
        self.table = dict(table)
        self.default_class = int(default_class)
        self.config = config

    @classmethod
    def train(cls, train: Dataset, cfg: DTableConfig | None = None) -> "DecisionTableModel":
        cfg = cfg or DTableConfig()
        if train.n_rows == 0:
            raise DataError("cannot train on an empty dataset")
        if train.classes_present() < 2:
            raise DataError("decision table needs at least two classes present")
        n_classes = len(train.class_values)
        codes, cuts = _encode_columns(train, cfg.bins)
        folds = min(cfg.folds, train.n_rows)
        fold_ids = stratified_fold_ids(train.y, n_classes, folds, cfg.seed, _FOLD_TAG)

        selected: list[int] = []
        best_acc = _cv_accuracy(codes, train.y, [], fold_ids, folds, n_classes)
        remaining = list(range(train.n_attrs))
        while remaining:
            round_best = None
            for j in remaining:
                acc = _cv_accuracy(codes, train.y, selected + [j], fold_ids,
                                   folds, n_classes)
                if acc > best_acc and (round_best is None or acc > round_best[0]):
                    round_best = (acc, j)
            if round_best is None:
                break
            best_acc, j = round_best
            selected.append(j)
            remaining.remove(j)
        selected.sort()

        default_class = int(np.argmax(np.bincount(train.y, minlength=n_classes)))
        table = {}
        if selected:
            keys, inverse = np.unique(codes[:, selected], axis=0, return_inverse=True)
            inverse = inverse.ravel()
            joint = np.bincount(inverse.astype(np.int64) * n_classes + train.y,
                                minlength=len(keys) * n_classes)
            majority = np.argmax(joint.reshape(len(keys), n_classes), axis=1)
            table = {",".join(map(str, key)): int(c)
                     for key, c in zip(keys.tolist(), majority)}
        used_cuts = {j: cuts[j] for j in selected if j in cuts}
        return cls("dtable", train.schema, train.class_values, selected, used_cuts,
                   table, default_class, cfg)

    def _keys(self, X: np.ndarray) -> list[str]:
        cols = []
        for j in self.attr_indices:
            col = X[:, j]
            if self.schema[j].kind == NOMINAL:
                cols.append(col.astype(np.int64))
            else:
                cols.append(np.searchsorted(self.cuts[j], col, side="left"))
        stacked = np.stack(cols, axis=1) if cols else np.empty((X.shape[0], 0), int)
        return [",".join(map(str, row)) for row in stacked.tolist()]

    def predict_proba(self, X):
        X = self._check_rows(X)
        out = np.zeros((X.shape[0], self.n_classes), dtype=np.float64)
        if not self.attr_indices:
            out[:, self.default_class] = 1.0
            return out
        for i, key in enumerate(self._keys(X)):
            out[i, self.table.get(key, self.default_class)] = 1.0
        return out

    def to_params(self):
        return {"folds": self.config.folds,
                "bins": self.config.bins,
                "seed": self.config.seed,
                "attrs": self.attr_indices,
                "cuts": {str(j): c.tolist() for j, c in self.cuts.items()},
                "table": self.table,
                "default_class": self.default_class}

    @classmethod
    def from_params(cls, kind, params, schema, class_values):
        cfg = DTableConfig(params["folds"], params["bins"], params["seed"])
        return cls(kind, schema, class_values, params["attrs"],
                   {int(j): c for j, c in params["cuts"].items()},
                   params["table"], params["default_class"], cfg)
