"""Tests for intervalroc.logistic module."""

import math

import numpy as np
import pytest

from intervalroc.config import LogisticConfig
from intervalroc.errors import ConvergenceError, InputContractError
from intervalroc.logistic import fit_logistic
from intervalroc.tabular import TabularDataset


def symmetric_design():
    """x in {-1, +1}, four rows each; three of four positive at +1, one of four at -1"""
    x = np.array([1.0] * 4 + [-1.0] * 4).reshape(-1, 1)
    y = np.array([1, 1, 1, 0, 1, 0, 0, 0])
    return TabularDataset(x, y, ("x",))


def noisy_dataset(seed=0, n=120):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 3)) * np.array([1.0, 10.0, 0.1]) + np.array([0.0, 50.0, 2.0])
    logits = 0.8 * x[:, 0] - 0.05 * (x[:, 1] - 50.0)
    y = (rng.uniform(size=n) < 1.0 / (1.0 + np.exp(-logits))).astype(int)
    return TabularDataset(x, y, ("a", "b", "c"))


class TestFitLogistic:
    """Test the IRLS solver."""

    def test_closed_form_without_penalty(self):
        model = fit_logistic(symmetric_design(), LogisticConfig(l2=0.0))
        assert model.weights[0] == pytest.approx(math.log(3.0), abs=1e-6)
        assert model.intercept == pytest.approx(0.0, abs=1e-6)
        assert model.gradient_norm <= 1e-8

    def test_probabilities_match_class_shares(self):
        model = fit_logistic(symmetric_design(), LogisticConfig(l2=0.0))
        p = model.predict_proba(np.array([[1.0], [-1.0]]))
        np.testing.assert_allclose(p, [0.75, 0.25], atol=1e-6)

    def test_penalty_shrinks_weights(self):
        free = fit_logistic(symmetric_design(), LogisticConfig(l2=0.0))
        shrunk = fit_logistic(symmetric_design(), LogisticConfig(l2=0.5))
        assert 0.0 < shrunk.weights[0] < free.weights[0]

    def test_default_penalty_is_one_over_n(self):
        data = noisy_dataset()
        model = fit_logistic(data)
        assert model.l2 == pytest.approx(1.0 / data.n_rows)

    def test_separable_data_stays_finite(self):
        x = np.array([[-2.0], [-1.0], [-0.5], [0.5], [1.0], [2.0]])
        data = TabularDataset(x, np.array([0, 0, 0, 1, 1, 1]), ("x",))
        model = fit_logistic(data, LogisticConfig(l2=0.1))
        assert np.all(np.isfinite(model.weights))
        assert model.weights[0] > 0

    def test_standardisation_uses_training_rows(self):
        data = noisy_dataset()
        model = fit_logistic(data)
        np.testing.assert_allclose(model.means, data.features.mean(axis=0))
        np.testing.assert_allclose(model.scales, data.features.std(axis=0))

    def test_constant_feature_dropped(self, caplog):
        data = noisy_dataset()
        features = np.hstack((data.features, np.full((data.n_rows, 1), 7.0)))
        widened = TabularDataset(features, data.labels, data.feature_names + ("const",))
        with caplog.at_level("WARNING", logger="intervalroc.logistic"):
            model = fit_logistic(widened)
        assert model.dropped_features == ("const",)
        assert model.weights.shape == (3,)
        assert "const" in caplog.text
        assert model.predict_proba(features).shape == (data.n_rows,)

    def test_predictions_are_probabilities(self):
        data = noisy_dataset(1)
        p = fit_logistic(data).predict_proba(data.features)
        assert np.all((p > 0.0) & (p < 1.0))

    def test_wrong_width_rejected(self):
        model = fit_logistic(noisy_dataset())
        with pytest.raises(InputContractError):
            model.predict_proba(np.zeros((2, 2)))

    def test_single_class_rejected(self):
        data = TabularDataset(np.array([[1.0], [2.0]]), np.array([1, 1]), ("x",))
        with pytest.raises(InputContractError):
            fit_logistic(data)

    def test_iteration_cap(self):
        with pytest.raises(ConvergenceError) as excinfo:
            fit_logistic(symmetric_design(), LogisticConfig(l2=0.0, max_iter=1))
        assert excinfo.value.gradient_norm > 1e-8
        assert excinfo.value.iterations == 1
