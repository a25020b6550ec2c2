"""Typed in-memory flow-record tables and the CSV loaders that produce them.

A :class:`Dataset` stores every attribute column in one float64 matrix.
Nominal attributes hold category indices into their schema's value list;
the index ``len(nominal_values)`` is reserved for categories first seen at
prediction time. Rows with NaN or infinite numeric fields are dropped at
load time and counted, so experiments stay auditable.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import DataError, ModelError
from .util import rng_for

NUMERIC = "numeric"
NOMINAL = "nominal"

#: canonical name of the non-attack class emitted by binary mapping
NORMAL_LABEL_BY_TAG = {"nslkdd": "normal", "cicids": "BENIGN", "generic": "normal"}
#: labels treated as non-attack traffic (compared case-insensitively)
_NORMAL_TOKENS = frozenset({"normal", "benign"})

#: fixed multiclass families for NSL-KDD, normal first
NSLKDD_FAMILIES = ("normal", "DoS", "R2L", "U2R", "Probe")

NSLKDD_ATTRIBUTES = (
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in",
    "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files", "num_outbound_cmds",
    "is_host_login", "is_guest_login", "count", "srv_count", "serror_rate",
    "srv_serror_rate", "rerror_rate", "srv_rerror_rate", "same_srv_rate",
    "diff_srv_rate", "srv_diff_host_rate", "dst_host_count", "dst_host_srv_count",
    "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate",
    "dst_host_serror_rate", "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate",
)
NSLKDD_NOMINAL_INDICES = (1, 2, 3)  # protocol_type, service, flag


@dataclass(frozen=True)
class AttributeSchema:
    """One column: a name, a kind, and (for nominal columns) its categories."""

    name: str
    kind: str
    nominal_values: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in (NUMERIC, NOMINAL):
            raise ValueError(f"unknown attribute kind {self.kind!r}")
        if self.kind == NOMINAL and not self.nominal_values:
            raise ValueError(f"nominal attribute {self.name!r} needs categories")
        if self.kind == NUMERIC and self.nominal_values:
            raise ValueError(f"numeric attribute {self.name!r} cannot have categories")
        if len(set(self.nominal_values)) != len(self.nominal_values):
            raise ValueError(f"duplicate categories on attribute {self.name!r}")

    @property
    def unknown_code(self) -> int:
        """Reserved index for categories never seen by this schema."""
        return len(self.nominal_values)


@dataclass(eq=False)
class ClassMapping:
    mode: str = "binary"  # binary | multiclass
    positive_name: str = "anomaly"

    def __post_init__(self):
        if self.mode not in ("binary", "multiclass"):
            raise ValueError(f"unknown class mapping mode {self.mode!r}")


@dataclass(frozen=True)
class SampleSpec:
    train_count: int
    test_count: int
    seed: int = 0
    stratified: bool = False

    def __post_init__(self):
        if self.train_count < 1 or self.test_count < 1:
            raise DataError("sample counts must be positive")


class Dataset:
    """Immutable table of flow records plus class labels.

    Equality covers schema, class order, and row contents; the source tag
    and dropped-row count are bookkeeping and excluded, so a dataset
    written to CSV and re-loaded compares equal.
    """

    def __init__(self, schema, class_values, X, y, source_tag="generic", dropped_rows=0):
        self.schema: tuple[AttributeSchema, ...] = tuple(schema)
        self.class_values: tuple[str, ...] = tuple(class_values)
        self.X = np.ascontiguousarray(X, dtype=np.float64)
        self.y = np.ascontiguousarray(y, dtype=np.int64)
        self.source_tag = source_tag
        self.dropped_rows = int(dropped_rows)
        self._validate()

    def _validate(self):
        names = [a.name for a in self.schema]
        if len(set(names)) != len(names):
            raise DataError("duplicate attribute names in schema")
        if self.X.ndim != 2 or self.X.shape[1] != len(self.schema):
            raise DataError("row width does not match schema")
        if self.y.shape != (self.X.shape[0],):
            raise DataError("class column length does not match row count")
        if self.y.size and (self.y.min() < 0 or self.y.max() >= len(self.class_values)):
            raise DataError("class index out of range")
        for j, attr in enumerate(self.schema):
            col = self.X[:, j]
            if attr.kind == NUMERIC:
                if not np.isfinite(col).all():
                    raise DataError(f"non-finite values in numeric attribute {attr.name!r}")
            else:
                if col.size and (col.min() < 0 or col.max() > attr.unknown_code):
                    raise DataError(f"category index out of range in {attr.name!r}")

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_attrs(self) -> int:
        return len(self.schema)

    def attribute_names(self) -> list[str]:
        return [a.name for a in self.schema]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y, minlength=len(self.class_values))

    def classes_present(self) -> int:
        return int(np.unique(self.y).size)

    def select(self, names) -> "Dataset":
        """Project onto the named attributes, keeping original relative order."""
        by_name = {a.name: j for j, a in enumerate(self.schema)}
        missing = [n for n in names if n not in by_name]
        if missing:
            raise DataError(f"unknown attributes: {', '.join(missing)}")
        cols = sorted(by_name[n] for n in names)
        return Dataset(
            [self.schema[j] for j in cols], self.class_values,
            self.X[:, cols], self.y, self.source_tag, self.dropped_rows,
        )

    def take(self, idx) -> "Dataset":
        return Dataset(self.schema, self.class_values, self.X[idx], self.y[idx],
                       self.source_tag, self.dropped_rows)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.schema == other.schema
                and self.class_values == other.class_values
                and np.array_equal(self.X, other.X)
                and np.array_equal(self.y, other.y))

    def __repr__(self):
        return (f"Dataset({self.n_rows} rows, {self.n_attrs} attrs, "
                f"{len(self.class_values)} classes, tag={self.source_tag})")


def _encode_nominal(values: pd.Series) -> tuple[tuple[str, ...], np.ndarray]:
    """First-appearance category order, so a written file re-loads identically."""
    cats = pd.unique(values)
    lookup = {v: i for i, v in enumerate(cats)}
    codes = values.map(lookup).to_numpy(dtype=np.float64)
    return tuple(str(c) for c in cats), codes


def _drop_nonfinite(X: np.ndarray, numeric_cols) -> np.ndarray:
    if not numeric_cols:
        return np.ones(X.shape[0], dtype=bool)
    return np.isfinite(X[:, numeric_cols]).all(axis=1)


def _check_field_counts(path: Path, expected: int | None, has_header: bool):
    """Pre-pass over the raw CSV: every line must have the same field count.

    Returns (header_fields or None, expected count, data line count).
    """
    with open(path, newline="", encoding="utf-8", errors="replace") as fh:
        reader = csv.reader(fh)
        header = None
        start_line = 1
        if has_header:
            header = next(reader, None)
            if not header or all(not c.strip() for c in header):
                raise DataError(f"{path}: unparseable header")
            expected = len(header)
            start_line = 2
        count = 0
        for lineno, row in enumerate(reader, start=start_line):
            if not row:
                continue  # tolerate blank trailing lines
            if expected is None:
                expected = len(row)
            if len(row) != expected:
                raise DataError(
                    f"{path}: line {lineno}: expected {expected} fields, got {len(row)}")
            count += 1
        if expected is None:
            raise DataError(f"{path}: empty file")
    return header, expected, count


def _mangle_duplicates(names) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for n in names:
        k = seen.get(n, 0)
        seen[n] = k + 1
        out.append(n if k == 0 else f"{n}.{k}")
    return out


def load_cicids(path) -> Dataset:
    """Load CICIDS2017-style flow CSVs (header row, all-numeric features).

    ``path`` may be a single CSV or a directory of CSVs with matching
    headers (the published set ships one file per capture day).
    """
    p = Path(path)
    if p.is_dir():
        files = sorted(q for q in p.iterdir() if q.suffix.lower() == ".csv")
        if not files:
            raise DataError(f"{p}: no CSV files in directory")
    elif p.exists():
        files = [p]
    else:
        raise DataError(f"{p}: no such file")

    frames = []
    names = None
    label_col = None
    for f in files:
        header, _, _ = _check_field_counts(f, None, has_header=True)
        stripped = _mangle_duplicates([h.strip() for h in header])
        if names is None:
            names = stripped
            matches = [i for i, h in enumerate(names) if "label" in h.lower()]
            if not matches:
                raise DataError(f"{f}: unparseable header: no label column")
            label_col = matches[-1]
        elif stripped != names:
            raise DataError(f"{f}: header differs from {files[0]}")
        df = pd.read_csv(f, header=0, dtype=str, skipinitialspace=True,
                         keep_default_na=False, na_filter=False)
        df.columns = names
        frames.append(df)
    df = pd.concat(frames, ignore_index=True) if len(frames) > 1 else frames[0]

    feature_names = [n for i, n in enumerate(names) if i != label_col]
    X = np.empty((len(df), len(feature_names)), dtype=np.float64)
    for j, n in enumerate(feature_names):
        X[:, j] = pd.to_numeric(df[n], errors="coerce").to_numpy(dtype=np.float64)
    labels = df[names[label_col]].str.strip()

    keep = np.isfinite(X).all(axis=1)
    dropped = int((~keep).sum())
    X = X[keep]
    class_values, y = _encode_nominal(labels[keep])
    schema = [AttributeSchema(n, NUMERIC) for n in feature_names]
    return Dataset(schema, class_values, X, y.astype(np.int64),
                   source_tag="cicids", dropped_rows=dropped)


def load_nslkdd(path) -> Dataset:
    """Load an NSL-KDD file: headerless, 42 fields (or 43 with difficulty)."""
    p = Path(path)
    if not p.exists():
        raise DataError(f"{p}: no such file")
    _, width, count = _check_field_counts(p, None, has_header=False)
    if width not in (42, 43):
        raise DataError(f"{p}: expected 42 or 43 fields per line, got {width}")
    if count == 0:
        raise DataError(f"{p}: empty file")

    df = pd.read_csv(p, header=None, dtype=str, skipinitialspace=True,
                     keep_default_na=False, na_filter=False)
    n_attrs = len(NSLKDD_ATTRIBUTES)
    schema = []
    X = np.empty((len(df), n_attrs), dtype=np.float64)
    for j in range(n_attrs):
        name = NSLKDD_ATTRIBUTES[j]
        col = df[j].str.strip()
        if j in NSLKDD_NOMINAL_INDICES:
            cats, codes = _encode_nominal(col)
            schema.append(AttributeSchema(name, NOMINAL, cats))
            X[:, j] = codes
        else:
            vals = pd.to_numeric(col, errors="coerce").to_numpy(dtype=np.float64)
            bad = np.flatnonzero(np.isnan(vals) & (col.to_numpy() != "NaN")
                                 & (col.to_numpy() != "nan"))
            if bad.size:
                i = int(bad[0])
                raise DataError(
                    f"{p}: line {i + 1}: non-numeric token {col.iloc[i]!r} "
                    f"in numeric column {name!r}")
            schema.append(AttributeSchema(name, NUMERIC))
            X[:, j] = vals

    labels = df[41].str.strip()
    numeric_cols = [j for j in range(n_attrs) if j not in NSLKDD_NOMINAL_INDICES]
    keep = _drop_nonfinite(X, numeric_cols)
    dropped = int((~keep).sum())
    X = X[keep]
    class_values, y = _encode_nominal(labels[keep])
    return Dataset(schema, class_values, X, y.astype(np.int64),
                   source_tag="nslkdd", dropped_rows=dropped)


def _parse_float(token: str) -> float | None:
    try:
        return float(token)
    except ValueError:
        return None


def load_generic(path) -> Dataset:
    """Load any headered CSV whose label column is named ``label``.

    Column kinds are inferred: numeric when every field parses as a float,
    nominal otherwise (categories in first-appearance order).
    """
    p = Path(path)
    if not p.exists():
        raise DataError(f"{p}: no such file")
    with open(p, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or all(not c.strip() for c in header):
            raise DataError(f"{p}: unparseable header")
        names = _mangle_duplicates([h.strip() for h in header])
        label_matches = [i for i, h in enumerate(names) if h.lower() == "label"]
        if not label_matches:
            raise DataError(f"{p}: no 'label' column in header")
        label_col = label_matches[-1]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(names):
                raise DataError(
                    f"{p}: line {lineno}: expected {len(names)} fields, got {len(row)}")
            rows.append([c.strip() for c in row])
    if not rows:
        raise DataError(f"{p}: no data rows")

    feature_idx = [i for i in range(len(names)) if i != label_col]
    columns = {i: [r[i] for r in rows] for i in feature_idx}
    schema = []
    X = np.empty((len(rows), len(feature_idx)), dtype=np.float64)
    for j, i in enumerate(feature_idx):
        parsed = [_parse_float(t) for t in columns[i]]
        if all(v is not None for v in parsed):
            schema.append(AttributeSchema(names[i], NUMERIC))
            X[:, j] = parsed
        else:
            cats, codes = _encode_nominal(pd.Series(columns[i], dtype=object))
            schema.append(AttributeSchema(names[i], NOMINAL, cats))
            X[:, j] = codes

    labels = pd.Series([r[label_col] for r in rows], dtype=object)
    numeric_cols = [j for j, a in enumerate(schema) if a.kind == NUMERIC]
    keep = _drop_nonfinite(X, numeric_cols)
    dropped = int((~keep).sum())
    X = X[keep]
    class_values, y = _encode_nominal(labels[keep])
    return Dataset(schema, class_values, X, y.astype(np.int64),
                   source_tag="generic", dropped_rows=dropped)


LOADERS = {"nslkdd": load_nslkdd, "cicids": load_cicids, "generic": load_generic}


def _format_cell(attr: AttributeSchema, v: float) -> str:
    if attr.kind == NOMINAL:
        code = int(v)
        if code >= attr.unknown_code:
            raise DataError(f"cannot write reserved unknown category in {attr.name!r}")
        return attr.nominal_values[code]
    return repr(float(v))


def write_csv(d: Dataset, path) -> None:
    """Write as a generic headered CSV; re-loading yields an equal Dataset."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([a.name for a in d.schema] + ["label"])
        for i in range(d.n_rows):
            cells = [_format_cell(a, d.X[i, j]) for j, a in enumerate(d.schema)]
            cells.append(d.class_values[d.y[i]])
            w.writerow(cells)


def _families_table() -> dict[str, str]:
    text = resources.files("idskit").joinpath("data/nslkdd_families.tsv").read_text("utf-8")
    table = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        attack, family = line.split("\t")
        table[attack] = family
    return table


def apply_class_mapping(d: Dataset, m: ClassMapping) -> Dataset:
    """Relabel classes: binary normal-vs-anomaly, or attack-family grouping."""
    if d.n_rows == 0:
        raise DataError("cannot map classes of an empty dataset")
    if m.mode == "binary":
        normal_name = NORMAL_LABEL_BY_TAG.get(d.source_tag, "normal")
        new_values = (normal_name, m.positive_name)
        is_normal = np.array(
            [v.strip().lower() in _NORMAL_TOKENS for v in d.class_values], dtype=bool)
        trans = np.where(is_normal, 0, 1).astype(np.int64)
        return Dataset(d.schema, new_values, d.X, trans[d.y], d.source_tag, d.dropped_rows)

    # multiclass
    if d.source_tag != "nslkdd":
        return Dataset(d.schema, d.class_values, d.X, d.y, d.source_tag, d.dropped_rows)
    table = _families_table()
    family_index = {f: i for i, f in enumerate(NSLKDD_FAMILIES)}
    trans = np.empty(len(d.class_values), dtype=np.int64)
    for i, label in enumerate(d.class_values):
        fam = "normal" if label.strip().lower() == "normal" else table.get(label.strip())
        if fam is None:
            raise DataError(f"attack label {label!r} missing from family lookup table")
        trans[i] = family_index[fam]
    return Dataset(d.schema, NSLKDD_FAMILIES, d.X, trans[d.y], d.source_tag, d.dropped_rows)


def _largest_remainder(counts: np.ndarray, total: int) -> np.ndarray:
    """Integer allocation proportional to counts, summing exactly to total."""
    exact = counts * (total / counts.sum())
    alloc = np.floor(exact).astype(np.int64)
    remainder = exact - alloc
    short = total - int(alloc.sum())
    if short > 0:
        order = np.lexsort((np.arange(counts.size), -remainder))
        alloc[order[:short]] += 1
    return alloc


def sample_subset(d: Dataset, spec: SampleSpec) -> tuple[Dataset, Dataset]:
    """Seeded disjoint train/test subsets, optionally class-stratified."""
    n = d.n_rows
    if spec.train_count + spec.test_count > n:
        raise DataError(
            f"cannot sample {spec.train_count}+{spec.test_count} rows from {n}")
    rng = rng_for(spec.seed, 0xD5)
    if not spec.stratified:
        perm = rng.permutation(n)
        train_idx = np.sort(perm[:spec.train_count])
        test_idx = np.sort(perm[spec.train_count:spec.train_count + spec.test_count])
        return d.take(train_idx), d.take(test_idx)

    counts = d.class_counts()
    present = counts > 0
    train_alloc = np.zeros_like(counts)
    test_alloc = np.zeros_like(counts)
    train_alloc[present] = _largest_remainder(counts[present], spec.train_count)
    test_alloc[present] = _largest_remainder(counts[present], spec.test_count)
    over = train_alloc + test_alloc > counts
    if over.any():
        c = int(np.flatnonzero(over)[0])
        raise DataError(
            f"class {d.class_values[c]!r} has {counts[c]} rows, "
            f"needs {train_alloc[c]}+{test_alloc[c]} for stratified sampling")
    train_parts, test_parts = [], []
    for c in range(len(d.class_values)):
        idx = np.flatnonzero(d.y == c)
        rng.shuffle(idx)
        train_parts.append(idx[:train_alloc[c]])
        test_parts.append(idx[train_alloc[c]:train_alloc[c] + test_alloc[c]])
    train_idx = np.sort(np.concatenate(train_parts))
    test_idx = np.sort(np.concatenate(test_parts))
    return d.take(train_idx), d.take(test_idx)


def align_to_schema(d: Dataset, schema, class_values) -> Dataset:
    """Re-encode a dataset onto a model's schema (names and kinds must match).

    Nominal categories are re-mapped by string; categories the schema has
    never seen get its reserved unknown index. Raises ModelError on any
    name or kind mismatch, DataError on classes the model cannot score.
    """
    by_name = {a.name: j for j, a in enumerate(d.schema)}
    cols = []
    for attr in schema:
        j = by_name.get(attr.name)
        if j is None:
            raise ModelError(f"test data lacks attribute {attr.name!r}")
        if d.schema[j].kind != attr.kind:
            raise ModelError(
                f"attribute {attr.name!r} is {d.schema[j].kind} in test data, "
                f"{attr.kind} in model")
        col = d.X[:, j]
        if attr.kind == NOMINAL:
            src = d.schema[j]
            lookup = {v: i for i, v in enumerate(attr.nominal_values)}
            trans = np.array(
                [lookup.get(v, attr.unknown_code) for v in src.nominal_values]
                + [attr.unknown_code], dtype=np.float64)  # last slot: source unknown
            col = trans[col.astype(np.int64)]
        cols.append(col)
    class_index = {v: i for i, v in enumerate(class_values)}
    missing = [v for i, v in enumerate(d.class_values)
               if v not in class_index and (d.y == i).any()]
    if missing:
        raise DataError(f"test data contains classes unknown to the model: {missing}")
    trans_y = np.array([class_index.get(v, 0) for v in d.class_values], dtype=np.int64)
    X = np.column_stack(cols) if cols else np.empty((d.n_rows, 0))
    return Dataset(schema, class_values, X, trans_y[d.y], d.source_tag, d.dropped_rows)


def dataset_info_tsv(d: Dataset) -> str:
    lines = [
        f"rows\t{d.n_rows}",
        f"attributes\t{d.n_attrs}",
        f"dropped_rows\t{d.dropped_rows}",
    ]
    counts = d.class_counts()
    for i, name in enumerate(d.class_values):
        lines.append(f"class\t{name}\t{counts[i]}")
    return "\n".join(lines) + "\n"
