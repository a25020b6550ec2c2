"""Information-gain attribute ranking and threshold filtering.

Gains are measured in bits against the class column. Numeric attributes
are discretized by equal-frequency binning for the gain computation only;
filtered datasets keep their original numeric values.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, NOMINAL
from .errors import DataError


@dataclass(frozen=True)
class RankedAttribute:
    name: str
    gain: float


@dataclass(frozen=True)
class SelectionConfig:
    threshold: float = 0.4
    bins: int = 10

    def __post_init__(self):
        if self.threshold < 0:
            raise ValueError("threshold must be >= 0")
        if self.bins < 2:
            raise ValueError("bins must be >= 2")


def entropy(class_counts) -> float:
    """Shannon entropy in bits of a count vector; 0*log(0) counts as 0."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if counts.size == 0 or (counts < 0).any():
        raise ValueError("counts must be non-negative")
    total = counts.sum()
    if total <= 0:
        raise ValueError("at least one count must be positive")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def equal_frequency_cuts(column, bins: int) -> np.ndarray:
    """Upper-inclusive cut points for equal-frequency binning.

    A value lands in bin ``searchsorted(cuts, v, side="left")``, so values
    equal to a cut go to the lower bin. Duplicate cuts are merged, which
    collapses constant columns into a single bin.
    """
    v = np.sort(np.asarray(column, dtype=np.float64))
    n = v.size
    if n == 0:
        raise ValueError("empty column")
    positions = (np.arange(1, bins) * n) // bins
    positions = positions[positions >= 1]
    return np.unique(v[positions - 1])


def discretize_numeric(column, bins: int) -> np.ndarray:
    """Equal-frequency bin index per value (ties at a boundary go lower)."""
    v = np.asarray(column, dtype=np.float64)
    if not np.isfinite(v).all():
        raise ValueError("column must be finite")
    cuts = equal_frequency_cuts(v, bins)
    return np.searchsorted(cuts, v, side="left").astype(np.int64)


def _attribute_codes(d: Dataset, attribute_index: int, bins: int) -> tuple[np.ndarray, int]:
    attr = d.schema[attribute_index]
    col = d.X[:, attribute_index]
    if attr.kind == NOMINAL:
        return col.astype(np.int64), attr.unknown_code + 1
    codes = discretize_numeric(col, bins)
    return codes, int(codes.max()) + 1 if codes.size else 1


def information_gain(d: Dataset, attribute_index: int, cfg: SelectionConfig | None = None) -> float:
    """Reduction in class entropy from partitioning on one attribute."""
    cfg = cfg or SelectionConfig()
    if not 0 <= attribute_index < d.n_attrs:
        raise ValueError(f"attribute index {attribute_index} out of range")
    codes, n_codes = _attribute_codes(d, attribute_index, cfg.bins)
    n_classes = len(d.class_values)
    joint = np.bincount(codes * n_classes + d.y,
                        minlength=n_codes * n_classes).reshape(n_codes, n_classes)
    class_counts = joint.sum(axis=0)
    sizes = joint.sum(axis=1)
    total = sizes.sum()
    h_class = entropy(class_counts)
    cond = 0.0
    for v in np.flatnonzero(sizes):
        cond += (sizes[v] / total) * entropy(joint[v])
    return float(max(h_class - cond, 0.0))


def rank_attributes(d: Dataset, cfg: SelectionConfig | None = None) -> list[RankedAttribute]:
    """All attributes ordered by gain, descending; ties keep schema order."""
    cfg = cfg or SelectionConfig()
    if d.n_attrs < 1:
        raise DataError("dataset has no attributes to rank")
    if d.classes_present() < 2:
        warnings.warn("single-class dataset: all information gains are zero",
                      stacklevel=2)
        return [RankedAttribute(a.name, 0.0) for a in d.schema]
    gains = [information_gain(d, j, cfg) for j in range(d.n_attrs)]
    order = sorted(range(d.n_attrs), key=lambda j: (-gains[j], j))
    return [RankedAttribute(d.schema[j].name, gains[j]) for j in order]


def filter_by_threshold(d: Dataset, ranking: list[RankedAttribute], threshold: float) -> Dataset:
    """Keep only attributes whose gain is strictly above the threshold."""
    gains = {r.name: r.gain for r in ranking}
    missing = [a.name for a in d.schema if a.name not in gains]
    if missing:
        raise DataError(f"ranking does not cover attributes: {', '.join(missing)}")
    keep = [a.name for a in d.schema if gains[a.name] > threshold]
    if not keep:
        raise DataError(
            f"no attribute has information gain above {threshold}: empty feature set")
    return d.select(keep)
