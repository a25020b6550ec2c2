"""Seed derivation, fold assignment, and parallelism knobs shared across learners.

All randomness flows through ``numpy.random.SeedSequence`` keyed by
(user seed, stream tags), so results are reproducible regardless of
execution order or thread count.
"""

from __future__ import annotations

import os

import numpy as np


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for the given seed and stream tags."""
    entropy = [int(seed)] + [int(s) for s in stream]
    return np.random.default_rng(np.random.SeedSequence(entropy=entropy))


def child_seed(seed: int, *stream: int) -> int:
    """Derive a 64-bit sub-seed, e.g. one per fold/base-learner pair."""
    entropy = [int(seed)] + [int(s) for s in stream]
    return int(np.random.SeedSequence(entropy=entropy).generate_state(1, np.uint64)[0])


def stratified_fold_ids(y: np.ndarray, n_classes: int, n_folds: int, seed: int, tag: int) -> np.ndarray:
    """Assign each row to one of ``n_folds`` folds, class-balanced to within one row."""
    out = np.empty(y.shape[0], dtype=np.int64)
    rng = rng_for(seed, tag)
    for c in range(n_classes):
        idx = np.flatnonzero(y == c)
        rng.shuffle(idx)
        out[idx] = np.arange(idx.size) % n_folds
    return out


def n_jobs() -> int:
    """Worker count for optional internal parallelism (env IDS_JOBS, default 1)."""
    try:
        return max(1, int(os.environ.get("IDS_JOBS", "1")))
    except ValueError:
        return 1
