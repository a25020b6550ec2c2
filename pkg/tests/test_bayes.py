import numpy as np
import pytest

from helpers import nominal_dataset

from idskit.classifiers import NaiveBayesModel
from idskit.dataset import AttributeSchema, Dataset
from idskit.errors import DataError
from idskit.fixtures import synthetic_dataset


def test_fixa_a_rows_predicted_attack(fixa):
    m = NaiveBayesModel.train(fixa)
    a_rows = fixa.X[fixa.X[:, 0] == 0]
    assert (m.predict_class(a_rows) == 0).all()  # class 0 is "attack"


def test_uninformative_attributes_fall_back_to_priors():
    d = nominal_dataset({"A": ["u"] * 8}, ["c0"] * 6 + ["c1"] * 2)
    m = NaiveBayesModel.train(d)
    proba = m.predict_proba(d.X[:1])
    assert m.predict_class(d.X).tolist() == [0] * 8
    # smoothed priors: (6+1)/(8+2) vs (2+1)/(8+2); constant attribute shifts both equally
    assert abs(proba[0, 0] - 0.7) < 0.05


def test_gaussian_likelihood_example():
    X = np.array([[0.0], [1.0], [10.0], [11.0]])
    y = np.array([0, 0, 1, 1])
    d = Dataset([AttributeSchema("x", "numeric")], ("c0", "c1"), X, y)
    m = NaiveBayesModel.train(d)
    assert m.predict_class(np.array([[0.5]]))[0] == 0
    assert m.predict_class(np.array([[10.5]]))[0] == 1


def test_single_class_errors():
    d = nominal_dataset({"A": ["u", "v"]}, ["c", "c"])
    with pytest.raises(DataError):
        NaiveBayesModel.train(d)


def test_duplication_leaves_argmax_unchanged():
    for seed in (3, 4, 5):
        d = synthetic_dataset(120, 2, 2, seed=seed)
        doubled = d.take(np.concatenate([np.arange(d.n_rows), np.arange(d.n_rows)]))
        a = NaiveBayesModel.train(d)
        b = NaiveBayesModel.train(doubled)
        assert np.array_equal(a.predict_class(d.X), b.predict_class(d.X))


def test_proba_normalized(synth300):
    m = NaiveBayesModel.train(synth300)
    proba = m.predict_proba(synth300.X)
    assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)
    assert (proba >= 0).all()


def test_unknown_category_is_smoothed_not_fatal(fixa):
    m = NaiveBayesModel.train(fixa)
    unknown = np.array([[2.0, 2.0, 2.0]])  # reserved unknown codes
    proba = m.predict_proba(unknown)
    assert np.isfinite(proba).all()
    assert abs(proba.sum() - 1.0) < 1e-9


def test_variance_floor_on_constant_feature():
    X = np.array([[1.0, 0.0], [1.0, 1.0], [1.0, 9.0], [1.0, 10.0]])
    y = np.array([0, 0, 1, 1])
    d = Dataset([AttributeSchema("c", "numeric"), AttributeSchema("x", "numeric")],
                ("a", "b"), X, y)
    m = NaiveBayesModel.train(d)
    assert np.isfinite(m.predict_proba(X)).all()
