"""Shared test utilities: dataset builders and independent brute-force oracles."""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from idskit.dataset import AttributeSchema, Dataset, NOMINAL, NUMERIC


def nominal_dataset(columns: dict[str, list[str]], labels: list[str]) -> Dataset:
    """Build a nominal-only Dataset from token columns, first-appearance coded."""
    schema = []
    cols = []
    for name, tokens in columns.items():
        values = list(dict.fromkeys(tokens))
        schema.append(AttributeSchema(name, NOMINAL, tuple(values)))
        cols.append([values.index(t) for t in tokens])
    class_values = list(dict.fromkeys(labels))
    y = np.array([class_values.index(l) for l in labels], dtype=np.int64)
    X = np.array(cols, dtype=np.float64).T if cols else np.empty((len(labels), 0))
    return Dataset(schema, class_values, X, y)


def entropy_oracle(counts) -> float:
    total = sum(counts)
    h = 0.0
    for c in counts:
        if c > 0:
            p = c / total
            h -= p * math.log2(p)
    return h


def ig_oracle(tokens, labels) -> float:
    """Brute-force information gain: partition rows by value, sum entropies."""
    base = entropy_oracle(list(Counter(labels).values()))
    total = len(labels)
    cond = 0.0
    for v in set(tokens):
        group = [l for t, l in zip(tokens, labels) if t == v]
        cond += (len(group) / total) * entropy_oracle(list(Counter(group).values()))
    return base - cond


def random_nominal_dataset(rng, max_rows=12, max_attrs=4, max_classes=3) -> Dataset:
    n = int(rng.integers(2, max_rows + 1))
    d = int(rng.integers(1, max_attrs + 1))
    k = int(rng.integers(2, max_classes + 1))
    columns = {}
    for j in range(d):
        cards = int(rng.integers(2, 4))
        columns[f"a{j}"] = [f"v{int(v)}" for v in rng.integers(0, cards, n)]
    labels = [f"c{int(c)}" for c in rng.integers(0, k, n)]
    if len(set(labels)) < 2:  # force two classes present
        labels[0] = "c0"
        labels[1] = "c1"
    return nominal_dataset(columns, labels)


def random_consistent_dataset(rng, max_rows=200) -> Dataset:
    """Mixed-kind dataset with no two equal attribute vectors labelled differently."""
    n = int(rng.integers(20, max_rows + 1))
    n_num = int(rng.integers(1, 4))
    n_nom = int(rng.integers(1, 3))
    schema = [AttributeSchema(f"num{j}", NUMERIC) for j in range(n_num)]
    schema += [AttributeSchema(f"nom{j}", NOMINAL, ("u", "v", "w")) for j in range(n_nom)]
    X = np.column_stack([rng.integers(0, 6, n).astype(float) for _ in range(n_num)]
                        + [rng.integers(0, 3, n).astype(float) for _ in range(n_nom)])
    y = rng.integers(0, int(rng.integers(2, 4)), n).astype(np.int64)
    seen: dict[tuple, int] = {}
    for i in range(n):
        key = tuple(X[i])
        if key in seen:
            y[i] = seen[key]  # duplicates keep the first label: consistent
        else:
            seen[key] = int(y[i])
    if len(np.unique(y)) < 2:
        for i in range(1, n):
            if not np.array_equal(X[i], X[0]):
                other = 1 if y[0] == 0 else 0
                dup = np.all(X == X[i], axis=1)
                y[dup] = other
                break
    k = int(y.max()) + 1
    return Dataset(schema, [f"c{i}" for i in range(k)], X, y)


def random_rows_for_schema(rng, schema, n: int, include_unknown=True) -> np.ndarray:
    """Random row matrix aligned to a schema, optionally with unknown categories."""
    cols = []
    for attr in schema:
        if attr.kind == NUMERIC:
            cols.append(rng.normal(0.5, 1.0, n))
        else:
            top = attr.unknown_code + (1 if include_unknown else 0)
            cols.append(rng.integers(0, max(top, 1), n).astype(float))
    return np.column_stack(cols)


def metrics_oracle(counts: np.ndarray) -> dict:
    """Recompute per-class and weighted metrics by brute force."""
    counts = np.asarray(counts, dtype=np.int64)
    k = counts.shape[0]
    total = int(counts.sum())
    per = []
    for c in range(k):
        tp = fp = fn = tn = 0
        for a in range(k):
            for p in range(k):
                v = int(counts[a, p])
                if a == c and p == c:
                    tp += v
                elif a == c:
                    fn += v
                elif p == c:
                    fp += v
                else:
                    tn += v
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        fpr = fp / (fp + tn) if fp + tn else 0.0
        per.append({"tp_rate": recall, "fp_rate": fpr, "precision": precision,
                    "recall": recall, "f_measure": f, "support": tp + fn})
    weighted = {key: sum(m[key] * m["support"] for m in per) / total
                for key in ("tp_rate", "fp_rate", "precision", "recall", "f_measure")}
    accuracy = sum(int(counts[c, c]) for c in range(k)) / total
    return {"per_class": per, "weighted": weighted, "accuracy": accuracy}
