import numpy as np
import pytest

from helpers import random_rows_for_schema

from idskit.classifiers import (DecisionTreeModel, ForestConfig, RandomForestModel,
                                TreeConfig, training_accuracy)
from idskit.classifiers.tree import Leaf
from idskit.persist import canonical_json, model_document


def test_degenerate_forest_equals_plain_tree(synth300):
    forest = RandomForestModel.train(
        synth300, ForestConfig(n_trees=1, bootstrap=False,
                               features_per_split=synth300.n_attrs, seed=9))
    tree = DecisionTreeModel.train(synth300, TreeConfig(criterion="info_gain"))
    rng = np.random.default_rng(17)
    rows = random_rows_for_schema(rng, synth300.schema, 1000)
    assert np.array_equal(forest.predict_class(rows), tree.predict_class(rows))


def test_fixa_forest_25_trees_perfect(fixa):
    m = RandomForestModel.train(fixa, ForestConfig(n_trees=25, seed=42))
    assert training_accuracy(m, fixa) == 1.0


def test_forest_determinism_bytes(synth300):
    cfg = ForestConfig(n_trees=10, seed=4)
    a = RandomForestModel.train(synth300, cfg)
    b = RandomForestModel.train(synth300, cfg)
    assert canonical_json(model_document(a, 4)) == canonical_json(model_document(b, 4))


def test_forest_parallel_matches_serial(synth300, monkeypatch):
    cfg = ForestConfig(n_trees=8, seed=11)
    serial = RandomForestModel.train(synth300, cfg)
    monkeypatch.setenv("IDS_JOBS", "4")
    parallel = RandomForestModel.train(synth300, cfg)
    assert canonical_json(model_document(serial, 0)) == canonical_json(
        model_document(parallel, 0))


def test_soft_vote_averages_tree_distributions(fixa):
    pure0 = Leaf(np.array([3, 0]))
    pure1 = Leaf(np.array([0, 7]))
    m = RandomForestModel(
        "rforest", fixa.schema, fixa.class_values, [pure0, pure1],
        ForestConfig(n_trees=2, seed=0))
    proba = m.predict_proba(fixa.X[:1])
    assert np.allclose(proba, [[0.5, 0.5]])
    assert m.predict_class(fixa.X[:1])[0] == 0  # tie -> lowest class index


def test_hard_vote_flag(fixa):
    skew = Leaf(np.array([2, 1]))
    m = RandomForestModel(
        "rforest", fixa.schema, fixa.class_values, [skew, skew, skew],
        ForestConfig(n_trees=3, seed=0, hard_vote=True))
    assert np.allclose(m.predict_proba(fixa.X[:1]), [[1.0, 0.0]])


def test_proba_simplex(synth300):
    m = RandomForestModel.train(synth300, ForestConfig(n_trees=5, seed=2))
    rng = np.random.default_rng(1)
    rows = random_rows_for_schema(rng, synth300.schema, 200)
    proba = m.predict_proba(rows)
    assert np.all(proba >= 0)
    assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)


def test_features_per_split_validation(synth300):
    with pytest.raises(ValueError):
        RandomForestModel.train(synth300,
                                ForestConfig(features_per_split=synth300.n_attrs + 1))
