"""k-nearest-neighbour classifier over mixed numeric/nominal records.

Numeric attributes are min-max normalized with parameters fitted on the
training set; nominal attributes contribute a 0/1 mismatch. Neighbours are
ordered by squared distance with ties broken by training-row index.
"""

from __future__ import annotations

import numpy as np

from ..dataset import Dataset, NOMINAL, NUMERIC
from ..errors import DataError
from .base import Model, register

_CHUNK = 256


@register
class KnnModel(Model):
    kinds = ("knn",)

    def __init__(self, kind, schema, class_values, k, mins, scales, Xn, y):
        super().__init__(kind, schema, class_values)
        self.k = int(k)
        self.mins = np.asarray(mins, dtype=np.float64)
        self.scales = np.asarray(scales, dtype=np.float64)
        self.Xn = np.asarray(Xn, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.int64)
        self.numeric_cols = np.array(
            [j for j, a in enumerate(schema) if a.kind == NUMERIC], dtype=np.int64)
        self.nominal_cols = np.array(
            [j for j, a in enumerate(schema) if a.kind == NOMINAL], dtype=np.int64)

    @classmethod
    def train(cls, train: Dataset, k: int = 1) -> "KnnModel":
        if train.n_rows == 0:
            raise DataError("cannot train on an empty dataset")
        if k < 1 or k > train.n_rows:
            raise DataError(f"k={k} must be in [1, {train.n_rows}]")
        numeric = [j for j, a in enumerate(train.schema) if a.kind == NUMERIC]
        mins = np.zeros(len(train.schema))
        scales = np.ones(len(train.schema))
        if numeric:
            cols = train.X[:, numeric]
            mins_n = cols.min(axis=0)
            ranges = cols.max(axis=0) - mins_n
            mins[numeric] = mins_n
            scales[numeric] = np.where(ranges > 0, ranges, 1.0)
        Xn = cls._normalize_static(train.X, mins, scales, numeric)
        return cls("knn", train.schema, train.class_values, k, mins, scales,
                   Xn, train.y)

    @staticmethod
    def _normalize_static(X, mins, scales, numeric_cols):
        out = X.copy()
        for j in numeric_cols:
            out[:, j] = (X[:, j] - mins[j]) / scales[j]
        return out

    def _normalize(self, X):
        return self._normalize_static(X, self.mins, self.scales,
                                      list(self.numeric_cols))

    def _neighbour_counts(self, Q: np.ndarray) -> np.ndarray:
        """Class counts of the k nearest training rows for each query row."""
        T = self.Xn
        n = T.shape[0]
        counts = np.zeros((Q.shape[0], self.n_classes), dtype=np.float64)
        tn = T[:, self.numeric_cols]
        t_sq = (tn * tn).sum(axis=1)
        for s in range(0, Q.shape[0], _CHUNK):
            qc = Q[s:s + _CHUNK]
            qn = qc[:, self.numeric_cols]
            d2 = (qn * qn).sum(axis=1)[:, None] + t_sq[None, :] - 2.0 * (qn @ tn.T)
            np.maximum(d2, 0.0, out=d2)
            for j in self.nominal_cols:
                d2 += qc[:, j][:, None] != T[:, j][None, :]
            counts[s:s + _CHUNK] = self._vote(d2)
        return counts

    def _vote(self, d2: np.ndarray) -> np.ndarray:
        q, n = d2.shape
        out = np.zeros((q, self.n_classes), dtype=np.float64)
        if self.k == 1:
            nearest = np.argmin(d2, axis=1)  # first minimum = lowest index
            out[np.arange(q), self.y[nearest]] = 1.0
            return out
        k = self.k
        for i in range(q):
            row = d2[i]
            if k < n:
                part = np.argpartition(row, k - 1)[:k]
                tau = row[part].max()
                cand = np.flatnonzero(row <= tau)
            else:
                cand = np.arange(n)
            order = cand[np.argsort(row[cand], kind="stable")]
            chosen = order[:k]
            out[i] = np.bincount(self.y[chosen], minlength=self.n_classes) / k
        return out

    def predict_proba(self, X):
        X = self._check_rows(X)
        return self._neighbour_counts(self._normalize(X))

    def to_params(self):
        return {"k": self.k,
                "mins": self.mins.tolist(),
                "scales": self.scales.tolist(),
                "rows": self.Xn.tolist(),
                "classes": self.y.tolist()}

    @classmethod
    def from_params(cls, kind, params, schema, class_values):
        return cls(kind, schema, class_values, params["k"], params["mins"],
                   params["scales"], np.array(params["rows"], dtype=np.float64),
                   params["classes"])
