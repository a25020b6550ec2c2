"""Ground-truth fixtures: the 8-row FIX-A table and a seeded flow-like generator.

FIX-A is constructed so attribute A separates the classes perfectly
(gain 1.0), B is independent of the class (gain 0.0), and C splits 3:1
against 1:3 (gain 1 - H(3,1) = 0.188722 bits). It is the shared
cross-module ground-truth instance for tests and demos.
"""

from __future__ import annotations

import numpy as np

from .dataset import AttributeSchema, Dataset, NOMINAL, NUMERIC, write_csv
from .errors import DataError
from .util import rng_for

FIXA_ROWS = (
    ("a", "x", "p", "attack"),
    ("a", "x", "p", "attack"),
    ("a", "y", "p", "attack"),
    ("a", "y", "q", "attack"),
    ("b", "x", "q", "normal"),
    ("b", "x", "q", "normal"),
    ("b", "y", "q", "normal"),
    ("b", "y", "p", "normal"),
)


def fixa_dataset() -> Dataset:
    schema = (
        AttributeSchema("A", NOMINAL, ("a", "b")),
        AttributeSchema("B", NOMINAL, ("x", "y")),
        AttributeSchema("C", NOMINAL, ("p", "q")),
    )
    class_values = ("attack", "normal")
    X = np.array([[schema[j].nominal_values.index(row[j]) for j in range(3)]
                  for row in FIXA_ROWS], dtype=np.float64)
    y = np.array([class_values.index(row[3]) for row in FIXA_ROWS], dtype=np.int64)
    return Dataset(schema, class_values, X, y, source_tag="generic")


def write_fixa_csv(path) -> None:
    write_csv(fixa_dataset(), path)


def _first_appearance(codes: np.ndarray, names: tuple[str, ...]):
    """Reorder categories by first appearance so CSV round-trips exactly."""
    order: list[int] = []
    seen: set[int] = set()
    for c in codes.astype(int):
        if c not in seen:
            seen.add(c)
            order.append(c)
    remap = {c: i for i, c in enumerate(order)}
    values = tuple(names[c] for c in order)
    new_codes = np.array([remap[int(c)] for c in codes], dtype=np.float64)
    return values, new_codes


def synthetic_dataset(n_rows: int, n_numeric: int = 4, n_nominal: int = 2,
                      seed: int = 0) -> Dataset:
    """Seeded flow-like table with the class planted on two attributes.

    Anomalies shift the first numeric attribute up and skew the first
    nominal attribute towards category v2; the remaining attributes are
    noise. Both planted attributes carry information gain comfortably
    above the default 0.4 selection threshold.
    """
    if n_rows < 1:
        raise DataError("generator needs at least one row")
    if n_numeric < 1 or n_nominal < 1:
        raise DataError("generator needs at least one numeric and one nominal attribute")
    rng = rng_for(seed, 0xF1C)
    anomaly = rng.random(n_rows) < 0.45
    numeric = rng.random((n_rows, n_numeric))
    numeric[:, 0] = np.where(anomaly,
                             rng.normal(0.75, 0.08, n_rows),
                             rng.normal(0.30, 0.10, n_rows))
    nominal = rng.integers(0, 3, size=(n_rows, n_nominal))
    skew = rng.random(n_rows)
    nominal[:, 0] = np.where(anomaly,
                             np.searchsorted([0.10, 0.20], skew),   # mostly v2
                             np.searchsorted([0.50, 0.95], skew))   # rarely v2

    cat_names = ("v0", "v1", "v2")
    schema = []
    cols = []
    for j in range(n_numeric):
        schema.append(AttributeSchema(f"num{j}", NUMERIC))
        cols.append(numeric[:, j])
    for j in range(n_nominal):
        values, codes = _first_appearance(nominal[:, j], cat_names)
        schema.append(AttributeSchema(f"nom{j}", NOMINAL, values))
        cols.append(codes)

    label_names = ("normal", "anomaly")
    class_values, y = _first_appearance(anomaly.astype(np.int64), label_names)
    return Dataset(schema, class_values, np.column_stack(cols),
                   y.astype(np.int64), source_tag="generic")
