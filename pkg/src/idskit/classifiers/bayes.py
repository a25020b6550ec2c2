"""Naive Bayes with Laplace-smoothed category tables and Gaussian numerics.

Stands in for a full Bayesian network: class-conditional independence,
add-one smoothing on priors and nominal tables, per-class mean/variance
(population variance, floored at 1e-9) on numeric attributes.
"""

from __future__ import annotations

import numpy as np

from ..dataset import Dataset, NOMINAL, NUMERIC
from ..errors import DataError

from .base import Model, register

_VAR_FLOOR = 1e-9


@register
class NaiveBayesModel(Model):
    kinds = ("bayes",)

    def __init__(self, kind, schema, class_values, log_priors, nominal_tables,
                 means, variances):
        super().__init__(kind, schema, class_values)
        self.log_priors = np.asarray(log_priors, dtype=np.float64)
        # attr index -> (n_categories + 1, n_classes) log-probability table;
        # the extra row covers the reserved unknown category
        self.nominal_tables = {int(j): np.asarray(t, dtype=np.float64)
                               for j, t in nominal_tables.items()}
        self.means = np.asarray(means, dtype=np.float64)
        self.variances = np.asarray(variances, dtype=np.float64)

    @classmethod
    def train(cls, train: Dataset) -> "NaiveBayesModel":
        if train.n_rows == 0:
            raise DataError("cannot train on an empty dataset")
        if train.classes_present() < 2:
            raise DataError("naive Bayes needs at least two classes present")
        n_classes = len(train.class_values)
        y = train.y
        class_counts = np.bincount(y, minlength=n_classes).astype(np.float64)
        log_priors = np.log((class_counts + 1.0) / (train.n_rows + n_classes))

        nominal_tables = {}
        d = train.n_attrs
        means = np.zeros((d, n_classes))
        variances = np.ones((d, n_classes))
        for j, attr in enumerate(train.schema):
            col = train.X[:, j]
            if attr.kind == NOMINAL:
                v = attr.unknown_code  # smoothing denominator counts known categories
                codes = col.astype(np.int64)
                joint = np.bincount(codes * n_classes + y,
                                    minlength=(v + 1) * n_classes)
                joint = joint.reshape(v + 1, n_classes).astype(np.float64)
                table = np.log((joint + 1.0) / (class_counts[None, :] + v))
                nominal_tables[j] = table
            else:
                g_mean = float(col.mean())
                g_var = max(float(col.var()), _VAR_FLOOR)
                for c in range(n_classes):
                    vals = col[y == c]
                    if vals.size == 0:  # class absent: fall back to global moments
                        means[j, c] = g_mean
                        variances[j, c] = g_var
                    else:
                        means[j, c] = vals.mean()
                        variances[j, c] = max(float(vals.var()), _VAR_FLOOR)
        return cls("bayes", train.schema, train.class_values, log_priors,
                   nominal_tables, means, variances)

    def predict_proba(self, X):
        X = self._check_rows(X)
        n = X.shape[0]
        log_post = np.tile(self.log_priors, (n, 1))
        for j, attr in enumerate(self.schema):
            col = X[:, j]
            if attr.kind == NOMINAL:
                codes = np.clip(col.astype(np.int64), 0, attr.unknown_code)
                log_post += self.nominal_tables[j][codes]
            else:
                mu = self.means[j][None, :]
                var = self.variances[j][None, :]
                diff = col[:, None] - mu
                log_post += -0.5 * (np.log(2.0 * np.pi * var) + diff * diff / var)
        log_post -= log_post.max(axis=1, keepdims=True)
        p = np.exp(log_post)
        return p / p.sum(axis=1, keepdims=True)

    def to_params(self):
        return {"log_priors": self.log_priors.tolist(),
                "nominal_tables": {str(j): t.tolist()
                                   for j, t in self.nominal_tables.items()},
                "means": self.means.tolist(),
                "variances": self.variances.tolist()}

    @classmethod
    def from_params(cls, kind, params, schema, class_values):
        return cls(kind, schema, class_values, params["log_priors"],
                   {int(j): t for j, t in params["nominal_tables"].items()},
                   params["means"], params["variances"])
