"""Tests for intervalroc.synthetic module."""

import numpy as np
import pytest
from scipy.stats import norm

from intervalroc.errors import InputContractError
from intervalroc.metrics import classical_auc
from intervalroc.synthetic import (
    SyntheticConfig, analytic_auc_star, build_intervals, generate_world, half_width,
    posterior_eta, true_auc_star, validate_bounds,
)

ALPHAS = [round(0.01 * k, 2) for k in range(1, 11)]


class TestPosterior:
    """Test the closed-form posterior."""

    def test_midpoint(self):
        assert posterior_eta(0.5, 0.0, 1.0) == pytest.approx(0.5)
        assert posterior_eta(2.0, 1.0, 3.0) == pytest.approx(0.5)

    def test_known_value(self):
        assert posterior_eta(1.5, 0.0, 1.0) == pytest.approx(0.7310585786, abs=1e-9)

    def test_matches_density_ratio(self):
        x = np.linspace(-3.0, 4.0, 29)
        ratio = norm.pdf(x, 1.0) / (norm.pdf(x, 1.0) + norm.pdf(x, 0.0))
        np.testing.assert_allclose(posterior_eta(x, 0.0, 1.0), ratio, rtol=1e-12)


class TestWorld:
    """Test sample generation."""

    def test_deterministic(self):
        config = SyntheticConfig(n_per_class=500, seed=4)
        np.testing.assert_array_equal(generate_world(config).x, generate_world(config).x)

    def test_class_means(self):
        world = generate_world(SyntheticConfig(n_per_class=100_000, seed=0))
        assert world.x[world.labels == 1].mean() == pytest.approx(1.0, abs=0.02)
        assert world.x[world.labels == 0].mean() == pytest.approx(0.0, abs=0.02)
        assert world.eta[world.labels == 0].mean() < world.eta[world.labels == 1].mean()

    def test_samples_view(self):
        world = generate_world(SyntheticConfig(n_per_class=3, seed=0))
        samples = list(world.samples())
        assert len(samples) == 6
        assert samples[0].interval is None
        assert samples[0].covered is None

    @pytest.mark.parametrize("kwargs", [{"n_per_class": 1}, {"alpha": 1.0}, {"mu0": float("nan")}])
    def test_invalid_config(self, kwargs):
        with pytest.raises(InputContractError):
            SyntheticConfig(**kwargs)

    def test_auc_star_matches_raw_scores(self):
        world = generate_world(SyntheticConfig(n_per_class=5_000, seed=3))
        assert true_auc_star(world) == pytest.approx(classical_auc(world.x, world.labels), abs=1e-12)

    def test_auc_star_near_analytic(self):
        world = generate_world(SyntheticConfig(n_per_class=20_000, seed=1))
        assert analytic_auc_star(0.0, 1.0) == pytest.approx(0.7602, abs=1e-4)
        assert true_auc_star(world) == pytest.approx(analytic_auc_star(0.0, 1.0), abs=0.01)


class TestBuildIntervals:
    """Test controlled-miscoverage intervals."""

    @pytest.fixture(scope="class")
    def world(self):
        return generate_world(SyntheticConfig(n_per_class=10_000, seed=2))

    def test_full_coverage_at_zero(self, world):
        attached = build_intervals(world, 0.0, seed=0)
        assert attached.covered.all()
        assert attached.half_width == pytest.approx(half_width(world.eta, 0.0))

    def test_exact_miscoverage(self, world):
        attached = build_intervals(world, 0.05, seed=0)
        assert attached.miscoverage(1) == pytest.approx(0.05)
        assert attached.miscoverage(0) == pytest.approx(0.05)

    def test_all_shifted(self, world):
        attached = build_intervals(world, 1.0, seed=0)
        assert not attached.covered.any()

    def test_clipped_to_unit_interval(self, world):
        attached = build_intervals(world, 0.1, seed=3)
        assert attached.lower.min() >= 0.0
        assert attached.upper.max() <= 1.0
        assert np.all(attached.lower <= attached.upper)

    def test_samples_carry_intervals(self, world):
        attached = build_intervals(world, 0.1, seed=3)
        sample = next(attached.samples())
        assert sample.covered == sample.interval.contains(sample.eta)

    def test_world_without_intervals(self, world):
        with pytest.raises(InputContractError):
            world.interval_dataset()


class TestValidateBounds:
    """Test containment of AUC* in the bound range."""

    @pytest.mark.parametrize("seed", range(5))
    def test_contained_for_every_alpha(self, seed):
        validation = validate_bounds(SyntheticConfig(seed=seed), ALPHAS)
        assert validation.all_contained
        for row in validation.rows:
            assert row.p_pair == pytest.approx(2 * row.alpha - row.alpha ** 2)
            assert row.realized_alpha_pos == pytest.approx(row.alpha)
            assert row.lower_bound <= row.auc_star <= row.upper_bound

    def test_reference_world_bounds(self):
        validation = validate_bounds(SyntheticConfig(), ALPHAS)
        assert 0.755 <= validation.auc_star <= 0.770
        by_alpha = {row.alpha: row for row in validation.rows}
        assert by_alpha[0.01].lower_bound == pytest.approx(0.574, abs=0.05)
        assert by_alpha[0.01].upper_bound == pytest.approx(0.903, abs=0.05)
        assert by_alpha[0.05].lower_bound == pytest.approx(0.459, abs=0.05)
        assert by_alpha[0.05].upper_bound == pytest.approx(0.992, abs=0.05)

    def test_widths_grow_with_alpha(self):
        validation = validate_bounds(SyntheticConfig(seed=0), ALPHAS)
        assert validation.widths_monotone

    def test_perfect_coverage(self):
        validation = validate_bounds(SyntheticConfig(n_per_class=2_000, seed=1), [0.0])
        row = validation.rows[0]
        assert row.p_pair == 0.0
        assert row.auc_l <= row.auc_star <= row.auc_u

    def test_threads_match_serial(self):
        template = SyntheticConfig(n_per_class=1_000, seed=6)
        serial = validate_bounds(template, [0.02, 0.08])
        threaded = validate_bounds(template, [0.02, 0.08], workers=2)
        assert [r.to_row() for r in serial.rows] == [r.to_row() for r in threaded.rows]

    def test_row_layout(self):
        validation = validate_bounds(SyntheticConfig(n_per_class=500, seed=0), [0.05])
        assert list(validation.rows[0].to_row()) == [
            "alpha", "auc_l", "auc_u", "p_pair", "lower_bound", "upper_bound", "auc_star", "contained",
        ]

    @pytest.mark.parametrize("alphas", [[], [1.0], [-0.01]])
    def test_invalid_alphas(self, alphas):
        with pytest.raises(InputContractError):
            validate_bounds(SyntheticConfig(n_per_class=100), alphas)
