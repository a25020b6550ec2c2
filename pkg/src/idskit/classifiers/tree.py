"""Decision-tree induction with selectable split criteria.

One learner serves three roles: the plain tree (gini), the C4.5-flavoured
variant (gain ratio), and the random tree that samples a feature subset at
every node. Numeric splits are binary at midpoints between class-boundary
values of the sorted column; nominal splits branch on every observed
category and an attribute is never re-tested below such a split (its value
is constant in each branch).

Growth continues while a node is impure and any valid split exists, even
when the best criterion value is zero: zero-gain splits are what let the
tree shatter parity-style data (two attributes individually uninformative,
jointly decisive), and they are required for full training-set consistency
on conflict-free data.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..dataset import Dataset, NOMINAL, NUMERIC
from ..errors import DataError
from ..util import rng_for
from .base import Model, register

CRITERIA = ("info_gain", "gain_ratio", "gini")


@dataclass(frozen=True)
class TreeConfig:
    criterion: str = "gini"
    min_leaf: int = 2
    max_depth: int | None = None

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"unknown criterion {self.criterion!r}")
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


class Leaf:
    __slots__ = ("counts",)

    def __init__(self, counts):
        self.counts = np.asarray(counts, dtype=np.int64)

    def to_dict(self):
        return {"leaf": self.counts.tolist()}


class NumericSplit:
    __slots__ = ("attr", "threshold", "le", "gt")

    def __init__(self, attr, threshold, le=None, gt=None):
        self.attr = attr
        self.threshold = threshold
        self.le = le
        self.gt = gt

    def to_dict(self):
        return {"attr": self.attr, "thr": self.threshold,
                "le": self.le.to_dict(), "gt": self.gt.to_dict()}


class NominalSplit:
    __slots__ = ("attr", "branches", "default")

    def __init__(self, attr, branches=None, default=0):
        self.attr = attr
        self.branches = branches if branches is not None else {}
        self.default = default  # category of the largest branch, for unseen values

    def to_dict(self):
        return {"attr": self.attr, "default": self.default,
                "branches": {str(c): n.to_dict() for c, n in self.branches.items()}}


def node_from_dict(doc):
    if "leaf" in doc:
        return Leaf(doc["leaf"])
    if "thr" in doc:
        node = NumericSplit(int(doc["attr"]), float(doc["thr"]))
        node.le = node_from_dict(doc["le"])
        node.gt = node_from_dict(doc["gt"])
        return node
    node = NominalSplit(int(doc["attr"]), default=int(doc["default"]))
    node.branches = {int(c): node_from_dict(n) for c, n in doc["branches"].items()}
    return node


def _entropy_rows(counts: np.ndarray) -> np.ndarray:
    """Entropy of each row of a count matrix, in bits."""
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / np.maximum(totals, 1), 0.0)
        logp = np.where(p > 0, np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return -(p * logp).sum(axis=1)


def _gini_rows(counts: np.ndarray) -> np.ndarray:
    totals = counts.sum(axis=1, keepdims=True)
    p = counts / np.maximum(totals, 1)
    return 1.0 - (p * p).sum(axis=1)


def _impurity_rows(counts: np.ndarray, criterion: str) -> np.ndarray:
    return _gini_rows(counts) if criterion == "gini" else _entropy_rows(counts)


def _split_scores(parent_impurity, branch_counts, criterion):
    """Criterion value of candidate splits given per-branch class counts.

    branch_counts has shape (n_candidates, n_branches, n_classes).
    """
    sizes = branch_counts.sum(axis=2)
    total = sizes.sum(axis=1, keepdims=True)
    weights = sizes / np.maximum(total, 1)
    child_imp = _impurity_rows(
        branch_counts.reshape(-1, branch_counts.shape[2]), criterion
    ).reshape(sizes.shape)
    gain = parent_impurity - (weights * child_imp).sum(axis=1)
    if criterion != "gain_ratio":
        return gain
    with np.errstate(divide="ignore", invalid="ignore"):
        logw = np.where(weights > 0, np.log2(np.where(weights > 0, weights, 1.0)), 0.0)
    split_info = -(weights * logw).sum(axis=1)
    return np.where(split_info > 0, gain / np.maximum(split_info, 1e-300), 0.0)


def _best_numeric_split(v, y, n_classes, min_leaf, criterion, parent_impurity):
    """Best (score, threshold) over class-boundary midpoints, or None."""
    order = np.argsort(v, kind="stable")
    vs = v[order]
    ys = y[order]
    n = vs.size
    change = np.flatnonzero(vs[1:] != vs[:-1]) + 1  # start index of each new value
    if change.size == 0:
        return None
    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), ys] = 1
    cum = np.vstack([np.zeros((1, n_classes), dtype=np.int64), np.cumsum(onehot, axis=0)])

    # distinct-value groups; a boundary is a candidate unless both adjacent
    # groups are pure in the same class (no optimal cut can sit there)
    starts = np.concatenate([[0], change])
    ends = np.concatenate([change, [n]])
    group_counts = cum[ends] - cum[starts]
    pure = (group_counts > 0).sum(axis=1) == 1
    majority = group_counts.argmax(axis=1)
    same_pure = pure[:-1] & pure[1:] & (majority[:-1] == majority[1:])
    candidates = change[~same_pure]
    if candidates.size == 0:
        return None

    left_n = candidates
    right_n = n - candidates
    valid = (left_n >= min_leaf) & (right_n >= min_leaf)
    if not valid.any():
        return None
    candidates = candidates[valid]
    left = cum[candidates]
    right = cum[n] - left
    branch_counts = np.stack([left, right], axis=1)
    scores = _split_scores(parent_impurity, branch_counts, criterion)
    best = int(np.argmax(scores))  # ties resolve to the lowest threshold
    i = candidates[best]
    threshold = (vs[i - 1] + vs[i]) / 2.0
    return float(scores[best]), threshold


def _nominal_split(codes, y, n_cats, n_classes, min_leaf, criterion, parent_impurity):
    """Score of the multiway split on one nominal attribute, or None."""
    joint = np.bincount(codes * n_classes + y,
                        minlength=n_cats * n_classes).reshape(n_cats, n_classes)
    sizes = joint.sum(axis=1)
    nonempty = sizes > 0
    if nonempty.sum() < 2 or (sizes >= min_leaf).sum() < 2:
        return None
    branch_counts = joint[nonempty][None, :, :]
    score = float(_split_scores(parent_impurity, branch_counts, criterion)[0])
    return score, joint, sizes


def grow_tree(X, y, schema, n_classes, cfg: TreeConfig,
              rng=None, features_per_split=None):
    """Greedy top-down induction over row-index subsets.

    Iterative depth-first construction with an explicit stack, so depth is
    not bounded by the interpreter recursion limit; node order (and hence
    any per-node feature sampling) is the pre-order walk with numeric
    children visited low-then-high and nominal branches in category order.
    """
    n_attrs = len(schema)
    sample = features_per_split is not None and features_per_split < n_attrs
    root = [None]
    stack = [(np.arange(X.shape[0]), 0, root, 0)]
    while stack:
        idx, depth, parent, slot = stack.pop()
        yi = y[idx]
        counts = np.bincount(yi, minlength=n_classes)
        leaf = Leaf(counts)
        if ((counts > 0).sum() <= 1
                or idx.size < 2 * cfg.min_leaf
                or (cfg.max_depth is not None and depth >= cfg.max_depth)):
            parent[slot] = leaf
            continue

        if sample:
            attrs = np.sort(rng.choice(n_attrs, size=features_per_split, replace=False))
        else:
            attrs = range(n_attrs)
        parent_impurity = float(_impurity_rows(counts[None, :], cfg.criterion)[0])
        best_score = -np.inf
        best = None  # (attr, kind-specific payload)
        for a in attrs:
            col = X[idx, a]
            if schema[a].kind == NUMERIC:
                found = _best_numeric_split(col, yi, n_classes, cfg.min_leaf,
                                            cfg.criterion, parent_impurity)
                if found is not None and found[0] > best_score:
                    best_score = found[0]
                    best = (int(a), NUMERIC, found[1])
            else:
                codes = col.astype(np.int64)
                found = _nominal_split(codes, yi, schema[a].unknown_code + 1,
                                       n_classes, cfg.min_leaf, cfg.criterion,
                                       parent_impurity)
                if found is not None and found[0] > best_score:
                    best_score = found[0]
                    best = (int(a), NOMINAL, found[1:])
        if best is None:
            parent[slot] = leaf
            continue

        attr, kind, payload = best
        if kind == NUMERIC:
            threshold = payload
            node = NumericSplit(attr, threshold)
            parent[slot] = node
            mask = X[idx, attr] <= threshold
            # push gt first so le pops first (pre-order left-to-right)
            stack.append((idx[~mask], depth + 1, _NumSetter(node, "gt"), 0))
            stack.append((idx[mask], depth + 1, _NumSetter(node, "le"), 0))
        else:
            joint, sizes = payload
            cats = [int(c) for c in np.flatnonzero(sizes > 0)]
            default = int(np.argmax(sizes))
            node = NominalSplit(attr, default=default)
            parent[slot] = node
            codes = X[idx, attr].astype(np.int64)
            for c in reversed(cats):
                stack.append((idx[codes == c], depth + 1, _NomSetter(node, c), 0))
    return root[0]


class _NumSetter:
    __slots__ = ("node", "side")

    def __init__(self, node, side):
        self.node = node
        self.side = side

    def __setitem__(self, _slot, child):
        setattr(self.node, self.side, child)


class _NomSetter:
    __slots__ = ("node", "cat")

    def __init__(self, node, cat):
        self.node = node
        self.cat = cat

    def __setitem__(self, _slot, child):
        self.node.branches[self.cat] = child


def predict_counts(root, X: np.ndarray, n_classes: int) -> np.ndarray:
    """Per-row leaf class-count vectors, batch-routed down the tree."""
    out = np.zeros((X.shape[0], n_classes), dtype=np.float64)
    stack = [(root, np.arange(X.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if isinstance(node, Leaf):
            out[idx] = node.counts
            continue
        if isinstance(node, NumericSplit):
            mask = X[idx, node.attr] <= node.threshold
            stack.append((node.le, idx[mask]))
            stack.append((node.gt, idx[~mask]))
            continue
        codes = X[idx, node.attr].astype(np.int64)
        routed = np.zeros(idx.size, dtype=bool)
        for c, child in node.branches.items():
            mask = codes == c
            routed |= mask
            stack.append((child, idx[mask]))
        if not routed.all():  # unseen or reserved-unknown categories
            stack.append((node.branches[node.default], idx[~routed]))
    return out


def counts_to_proba(counts: np.ndarray) -> np.ndarray:
    totals = counts.sum(axis=1, keepdims=True)
    return counts / np.maximum(totals, 1e-300)


def _warn_if_single_class(train: Dataset):
    if train.n_rows == 0:
        raise DataError("cannot train on an empty dataset")
    if train.classes_present() < 2:
        warnings.warn("training data has a single class: degenerate model",
                      stacklevel=3)


@register
class DecisionTreeModel(Model):
    """Plain decision tree; criterion choice also serves the C4.5 variant."""

    kinds = ("dtree", "j48")

    def __init__(self, kind, schema, class_values, root, config: TreeConfig):
        super().__init__(kind, schema, class_values)
        self.root = root
        self.config = config

    @classmethod
    def train(cls, train: Dataset, cfg: TreeConfig | None = None,
              kind: str = "dtree") -> "DecisionTreeModel":
        cfg = cfg or TreeConfig()
        _warn_if_single_class(train)
        root = grow_tree(train.X, train.y, train.schema, len(train.class_values), cfg)
        return cls(kind, train.schema, train.class_values, root, cfg)

    def predict_proba(self, X):
        X = self._check_rows(X)
        return counts_to_proba(predict_counts(self.root, X, self.n_classes))

    def to_params(self):
        return {"criterion": self.config.criterion,
                "min_leaf": self.config.min_leaf,
                "max_depth": self.config.max_depth,
                "root": self.root.to_dict()}

    @classmethod
    def from_params(cls, kind, params, schema, class_values):
        cfg = TreeConfig(params["criterion"], params["min_leaf"], params["max_depth"])
        return cls(kind, schema, class_values, node_from_dict(params["root"]), cfg)


@register
class RandomTreeModel(Model):
    """One unbagged tree with a fresh feature sample at every node."""

    kinds = ("rtree",)

    def __init__(self, kind, schema, class_values, root, config):
        super().__init__(kind, schema, class_values)
        self.root = root
        self.config = config

    @classmethod
    def train(cls, train: Dataset, cfg=None) -> "RandomTreeModel":
        from .forest import ForestConfig  # local import avoids a cycle

        cfg = cfg or ForestConfig(n_trees=1, bootstrap=False)
        _warn_if_single_class(train)
        m = cfg.resolved_features(train.n_attrs)
        rng = rng_for(cfg.seed, 0)
        root = grow_tree(train.X, train.y, train.schema, len(train.class_values),
                         TreeConfig(criterion="info_gain"), rng=rng,
                         features_per_split=m)
        return cls("rtree", train.schema, train.class_values, root, cfg)

    def predict_proba(self, X):
        X = self._check_rows(X)
        return counts_to_proba(predict_counts(self.root, X, self.n_classes))

    def to_params(self):
        return {"seed": self.config.seed,
                "features_per_split": self.config.features_per_split,
                "root": self.root.to_dict()}

    @classmethod
    def from_params(cls, kind, params, schema, class_values):
        from .forest import ForestConfig

        cfg = ForestConfig(n_trees=1, bootstrap=False, seed=params["seed"],
                           features_per_split=params["features_per_split"])
        return cls(kind, schema, class_values, node_from_dict(params["root"]), cfg)


def training_accuracy(model: Model, d: Dataset) -> float:
    return float((model.predict_class(d.X) == d.y).mean())
