import numpy as np
import pytest

from helpers import nominal_dataset

from idskit.classifiers import DecisionTreeModel, TreeConfig, training_accuracy
from idskit.ensemble import (StackingConfig, StackingModel, generate_meta_features,
                             train_stacking)
from idskit.errors import DataError
from idskit.persist import canonical_json, model_document


def test_meta_feature_shape(synth300):
    cfg = StackingConfig(seed=1)
    mf = generate_meta_features(synth300, cfg)
    assert mf.dataset.X.shape == (synth300.n_rows,
                                  len(cfg.base_learners) * len(synth300.class_values))
    assert np.array_equal(mf.dataset.y, synth300.y)


def test_meta_blocks_are_probability_simplexes(synth300):
    cfg = StackingConfig(seed=1)
    mf = generate_meta_features(synth300, cfg)
    k = len(synth300.class_values)
    for b in range(len(cfg.base_learners)):
        block = mf.dataset.X[:, b * k:(b + 1) * k]
        assert np.allclose(block.sum(axis=1), 1.0, atol=1e-9)
        assert (block >= 0).all()


def test_out_of_fold_rows_are_one_hot_on_fixa(fixa):
    # a lone tree base is out-of-fold perfect on FIX-A (attribute A survives
    # every fold), so each meta row is exactly one-hot on the true class
    cfg = StackingConfig(base_learners=("dtree",), seed=0)
    mf = generate_meta_features(fixa, cfg)
    expected = np.zeros((fixa.n_rows, 2))
    expected[np.arange(fixa.n_rows), fixa.y] = 1.0
    assert np.array_equal(mf.dataset.X, expected)


def test_fold_bookkeeping_proves_no_leakage(synth300):
    mf = generate_meta_features(synth300, StackingConfig(seed=2))
    scored_all = np.concatenate(mf.fold_scored_rows)
    assert sorted(scored_all.tolist()) == list(range(synth300.n_rows))
    for trained, scored in zip(mf.fold_train_rows, mf.fold_scored_rows):
        assert len(np.intersect1d(trained, scored)) == 0
        assert len(trained) + len(scored) == synth300.n_rows


def test_fixa_default_config_trains_perfectly(fixa):
    m = train_stacking(fixa, StackingConfig(seed=0))
    assert training_accuracy(m, fixa) == 1.0
    proba = m.predict_proba(fixa.X)
    assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)


def test_single_base_identity_on_fixa(fixa):
    cfg = StackingConfig(base_learners=("dtree",), meta_learner="dtree", seed=0)
    stacked = train_stacking(fixa, cfg)
    base = DecisionTreeModel.train(fixa, TreeConfig(criterion="gini"))
    assert np.array_equal(stacked.predict_class(fixa.X), base.predict_class(fixa.X))


def test_held_out_fixa_row_predicts_normal(fixa):
    m = train_stacking(fixa, StackingConfig(seed=0))
    row = np.array([[1.0, 0.0, 0.0]])  # A=b, B=x, C=p: unseen combination
    assert m.class_values[m.predict_class(row)[0]] == "normal"


def test_determinism_same_seed(fixa):
    a = train_stacking(fixa, StackingConfig(seed=3))
    b = train_stacking(fixa, StackingConfig(seed=3))
    assert canonical_json(model_document(a, 3)) == canonical_json(model_document(b, 3))


def test_class_with_one_row_errors():
    d = nominal_dataset({"A": ["u", "v", "u", "v", "u"]},
                        ["c0", "c0", "c0", "c0", "c1"])
    with pytest.raises(DataError, match="out-of-fold"):
        generate_meta_features(d, StackingConfig(seed=0))


def test_folds_shrink_to_smallest_class(fixa):
    mf = generate_meta_features(fixa, StackingConfig(folds=5, seed=0))
    assert len(mf.fold_train_rows) == 4  # 4 rows per class < 5 requested folds


def test_config_validation():
    with pytest.raises(ValueError):
        StackingConfig(base_learners=())
    with pytest.raises(ValueError):
        StackingConfig(folds=1)


def test_stacking_params_round_trip(fixa):
    m = train_stacking(fixa, StackingConfig(seed=4))
    doc = m.to_params()
    again = StackingModel.from_params("hybrid", doc, fixa.schema, fixa.class_values)
    assert np.array_equal(again.predict_proba(fixa.X), m.predict_proba(fixa.X))
