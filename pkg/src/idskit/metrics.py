"""Confusion matrices and the weighted TP/FP/precision/recall/F-measure suite.

Per-class rates follow the one-vs-rest reading of the confusion matrix;
weighted averages use actual-class support as weights, which makes the
weighted TP rate and weighted recall coincide exactly with accuracy.
Zero-denominator rates are defined as 0 so tables stay total.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DataError


@dataclass(frozen=True)
class ClassMetrics:
    label: str
    tp_rate: float
    fp_rate: float
    precision: float
    recall: float
    f_measure: float
    support: int


@dataclass(frozen=True)
class WeightedRates:
    tp_rate: float
    fp_rate: float
    precision: float
    recall: float
    f_measure: float


@dataclass(frozen=True)
class MetricsReport:
    per_class: tuple[ClassMetrics, ...]
    weighted: WeightedRates
    accuracy: float


class ConfusionMatrix:
    """Square count matrix indexed [actual][predicted] over ordered labels."""

    def __init__(self, labels, counts):
        self.labels = tuple(labels)
        self.counts = np.asarray(counts, dtype=np.int64)
        n = len(self.labels)
        if self.counts.shape != (n, n):
            raise ValueError("counts must be square over the label list")
        if (self.counts < 0).any():
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_model(cls, model, test: Dataset) -> "ConfusionMatrix":
        pred = model.predict_class(test.X)
        n = len(model.class_values)
        counts = np.bincount(test.y * n + pred, minlength=n * n).reshape(n, n)
        return cls(model.class_values, counts)

    def to_tsv(self) -> str:
        out = io.StringIO()
        out.write("actual\\predicted\t" + "\t".join(self.labels) + "\n")
        for i, label in enumerate(self.labels):
            out.write(label + "\t" + "\t".join(map(str, self.counts[i])) + "\n")
        return out.getvalue()


def _rate(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def per_class_metrics(cm: ConfusionMatrix) -> tuple[ClassMetrics, ...]:
    """One-vs-rest rates per class; zero denominators yield 0."""
    if cm.total <= 0:
        raise DataError("empty confusion matrix")
    counts = cm.counts
    total = cm.total
    out = []
    for c in range(len(cm.labels)):
        tp = int(counts[c, c])
        fn = int(counts[c].sum()) - tp
        fp = int(counts[:, c].sum()) - tp
        tn = total - tp - fn - fp
        precision = _rate(tp, tp + fp)
        recall = _rate(tp, tp + fn)
        f_measure = _rate(2 * precision * recall, precision + recall)
        out.append(ClassMetrics(
            label=cm.labels[c],
            tp_rate=recall,
            fp_rate=_rate(fp, fp + tn),
            precision=precision,
            recall=recall,
            f_measure=f_measure,
            support=tp + fn,
        ))
    return tuple(out)


def weighted_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Support-weighted averages plus accuracy.

    Weighted recall (and TP rate) is computed as trace/total, which is
    algebraically the support-weighted average of per-class recalls and
    keeps the identity with accuracy exact.
    """
    per_class = per_class_metrics(cm)
    total = cm.total
    accuracy = float(np.trace(cm.counts)) / total

    def wavg(values) -> float:
        return sum(v * m.support for v, m in zip(values, per_class)) / total

    weighted = WeightedRates(
        tp_rate=accuracy,
        fp_rate=wavg([m.fp_rate for m in per_class]),
        precision=wavg([m.precision for m in per_class]),
        recall=accuracy,
        f_measure=wavg([m.f_measure for m in per_class]),
    )
    return MetricsReport(per_class, weighted, accuracy)


REPORT_COLUMNS = ("Algorithm", "TP", "FP", "Precision", "Recall", "F-measure", "Accuracy")


def _cells(name: str, report: MetricsReport | None, note: str | None) -> list[str]:
    if report is None:
        return [name, "-", "-", "-", "-", "-", "-"]
    w = report.weighted
    return [name] + [f"{v:.3f}" for v in
                     (w.tp_rate, w.fp_rate, w.precision, w.recall, w.f_measure,
                      report.accuracy)]


def render_report(rows, fmt: str = "tsv", times=None, notes=None) -> str:
    """Render (algorithm, MetricsReport) rows as a TSV or aligned-markdown table.

    ``times`` optionally maps algorithm name to (train_seconds,
    test_seconds); ``notes`` maps name to a remark (e.g. failure reason).
    """
    rows = list(rows)
    if not rows:
        raise DataError("no report rows to render")
    times = times or {}
    notes = notes or {}
    header = list(REPORT_COLUMNS)
    if times:
        header += ["Train(s)", "Test(s)"]
    if notes:
        header += ["Note"]
    table = [header]
    for name, report in rows:
        cells = _cells(name, report, notes.get(name))
        if times:
            t = times.get(name)
            cells += [f"{t[0]:.2f}", f"{t[1]:.2f}"] if t else ["-", "-"]
        if notes:
            cells += [notes.get(name, "")]
        table.append(cells)

    if fmt == "tsv":
        return "\n".join("\t".join(row) for row in table) + "\n"
    if fmt == "markdown":
        widths = [max(len(row[j]) for row in table) for j in range(len(header))]
        def line(row):
            return "| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |"
        sep = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
        return "\n".join([line(table[0]), sep] + [line(r) for r in table[1:]]) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
