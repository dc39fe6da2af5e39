"""Tests for intervalroc.metrics module."""

import numpy as np
import pytest

from intervalroc.curves import IntegrationRule
from intervalroc.errors import EmptyClassError, InputContractError, SweepLevelError
from intervalroc.metrics import (
    ThreeRegion, abstention_rate, auc_l, auc_u, classical_auc, confidence_sweep,
    curve_diagnostics, evaluate, optimal_auc_bounds, pairwise_counts, uauc,
)
from intervalroc.models import ClassedIntervalDataset

REPORT_KEYS = {
    "auc_l", "auc_u", "p_correct", "p_overlap", "p_incorrect", "uauc",
    "abstention_rate", "bounds", "confidence_level", "n_pos", "n_neg",
}


def brute_force_counts(data):
    """Double loop over every pair through numpy broadcasting"""
    above = data.pos_lower[:, None] > data.neg_upper[None, :]
    below = data.pos_upper[:, None] < data.neg_lower[None, :]
    return int(above.sum()), int(below.sum())


def tied_intervals(seed, n_pos=30, n_neg=45):
    rng = np.random.default_rng(seed)
    pos = np.sort(np.round(rng.uniform(0.2, 1.0, (n_pos, 2)), 1), axis=1)
    neg = np.sort(np.round(rng.uniform(0.0, 0.8, (n_neg, 2)), 1), axis=1)
    return ClassedIntervalDataset(pos[:, 0], pos[:, 1], neg[:, 0], neg[:, 1])


@pytest.fixture
def hand_example():
    """Four pairs: two correct, two overlapping"""
    return ClassedIntervalDataset.from_pairs([(0.6, 0.8), (0.3, 0.5)], [(0.1, 0.2), (0.4, 0.7)])


class TestPairwiseCounts:
    """Test the three-region counting kernel."""

    def test_hand_example(self, hand_example):
        region = pairwise_counts(hand_example)
        assert (region.correct, region.overlap, region.incorrect) == (2, 2, 0)
        assert region.p_correct == 0.5
        assert region.p_overlap == 0.5
        assert region.p_incorrect == 0.0

    def test_identical_intervals_all_overlap(self):
        data = ClassedIntervalDataset.from_pairs([(0.3, 0.6)] * 4, [(0.3, 0.6)] * 3)
        region = pairwise_counts(data)
        assert (region.p_correct, region.p_overlap, region.p_incorrect) == (0.0, 1.0, 0.0)

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_brute_force(self, seed):
        data = tied_intervals(seed)
        correct, incorrect = brute_force_counts(data)
        region = pairwise_counts(data)
        assert region.correct == correct
        assert region.incorrect == incorrect
        assert region.correct + region.overlap + region.incorrect == data.pair_count

    def test_decomposition_identity(self):
        data = tied_intervals(11)
        region = pairwise_counts(data)
        assert auc_l(data) == region.p_correct
        assert auc_u(data) - auc_l(data) == pytest.approx(region.p_overlap, abs=1e-12)
        assert auc_l(data) <= auc_u(data)

    def test_single_class_rejected(self):
        data = ClassedIntervalDataset.from_pairs([], [(0.1, 0.2)])
        with pytest.raises(EmptyClassError):
            pairwise_counts(data)

    def test_region_counts_must_add_up(self):
        with pytest.raises(InputContractError):
            ThreeRegion(correct=1, incorrect=1, overlap=1, pair_count=4)


class TestClassicalReduction:
    """Test that point intervals reduce to classical ROC analysis."""

    def test_distinct_points(self):
        rng = np.random.default_rng(5)
        scores = rng.uniform(size=60)
        labels = np.array([1] * 25 + [0] * 35)
        data = ClassedIntervalDataset.from_labels(labels, scores, scores)
        expected = classical_auc(scores, labels)
        assert auc_l(data) == pytest.approx(expected, abs=1e-12)
        assert auc_u(data) == pytest.approx(expected, abs=1e-12)
        assert abstention_rate(pairwise_counts(data)) == 0.0

    def test_tied_points_average_to_classical(self):
        scores = np.array([0.2, 0.5, 0.5, 0.8, 0.5, 0.1, 0.8])
        labels = np.array([1, 1, 0, 1, 0, 0, 0])
        data = ClassedIntervalDataset.from_labels(labels, scores, scores)
        assert (auc_l(data) + auc_u(data)) / 2.0 == pytest.approx(classical_auc(scores, labels))

    def test_classical_auc_edges(self):
        assert classical_auc([0.9, 0.8, 0.1, 0.2], [1, 1, 0, 0]) == 1.0
        assert classical_auc([0.5, 0.5, 0.5], [1, 0, 0]) == 0.5
        with pytest.raises(EmptyClassError):
            classical_auc([0.1, 0.2], [1, 1])


class TestUaucAndAbstention:
    """Test uAUC and the abstention rate."""

    def test_hand_example(self, hand_example):
        region = pairwise_counts(hand_example)
        assert uauc(region) == 1.0
        assert abstention_rate(region) == 0.5

    def test_undefined_when_nothing_decisive(self):
        region = ThreeRegion(correct=0, incorrect=0, overlap=6, pair_count=6)
        assert uauc(region) is None
        assert abstention_rate(region) == 1.0

    def test_mixed(self):
        region = ThreeRegion(correct=3, incorrect=1, overlap=4, pair_count=8)
        assert uauc(region) == 0.75


class TestOptimalAucBounds:
    """Test the optimal-AUC range."""

    def test_p_pair(self):
        bounds = optimal_auc_bounds(0.6, 0.9, 0.05, 0.05)
        assert bounds.p_pair == pytest.approx(0.0975)
        assert bounds.lower_bound == pytest.approx(0.5025)
        assert bounds.upper_bound == pytest.approx(0.9975)

    def test_perfect_coverage(self):
        bounds = optimal_auc_bounds(0.61, 0.94, 0.0, 0.0)
        assert bounds.lower_bound == 0.61
        assert bounds.upper_bound == 0.94
        assert bounds.p_pair == 0.0

    def test_clamped_but_raw_kept(self):
        bounds = optimal_auc_bounds(0.05, 0.97, 0.1, 0.1)
        assert bounds.raw_lower == pytest.approx(-0.14)
        assert bounds.lower_bound == 0.0
        assert bounds.upper_bound == 1.0
        assert bounds.to_dict()["raw_upper"] == pytest.approx(1.16)

    def test_unequal_alphas(self):
        bounds = optimal_auc_bounds(0.7, 0.8, 0.1, 0.0)
        assert bounds.p_pair == pytest.approx(0.1)

    @pytest.mark.parametrize("args", [(0.5, 0.6, -0.1, 0.0), (0.5, 0.6, 0.0, 1.5), (1.2, 0.6, 0.0, 0.0)])
    def test_out_of_range(self, args):
        with pytest.raises(InputContractError):
            optimal_auc_bounds(*args)


class TestEvaluate:
    """Test the combined report."""

    def test_report_keys(self, hand_example):
        report = evaluate(hand_example, 0.9, 0.05, 0.05)
        document = report.to_dict()
        assert set(document) == REPORT_KEYS
        assert document["confidence_level"] == 0.9
        assert document["bounds"]["p_pair"] == pytest.approx(0.0975)
        assert document["n_pos"] == 2

    def test_bounds_need_both_alphas(self, hand_example):
        with pytest.raises(InputContractError):
            evaluate(hand_example, alpha_pos=0.05)

    def test_no_bounds_by_default(self, hand_example):
        assert evaluate(hand_example).to_dict()["bounds"] is None

    def test_undefined_uauc_is_null(self):
        data = ClassedIntervalDataset.from_pairs([(0.3, 0.6)], [(0.3, 0.6)])
        assert evaluate(data).to_dict()["uauc"] is None


class TestCurveDiagnostics:
    """Test the integration cross-check."""

    def test_step_deltas_vanish(self):
        diagnostics = curve_diagnostics(tied_intervals(2), IntegrationRule.STEP)
        assert diagnostics["integration_rule"] == "step"
        assert diagnostics["auc_l_delta"] < 1e-12
        assert diagnostics["auc_u_delta"] < 1e-12
        assert diagnostics["region_sum"] == pytest.approx(1.0)


def widening_provider(half_widths):
    """Symmetric intervals around fixed scores, wider at higher levels"""
    pos_scores = np.array([0.9, 0.4])
    neg_scores = np.array([0.1, 0.5])

    def provider(level):
        w = half_widths[level]
        return ClassedIntervalDataset(pos_scores - w, pos_scores + w, neg_scores - w, neg_scores + w)

    return provider


class TestConfidenceSweep:
    """Test sweeping confidence levels."""

    HALF_WIDTHS = {0.0: 0.0, 0.3: 0.06, 0.6: 0.16, 0.9: 0.45}

    def test_symmetric_family(self):
        sweep = confidence_sweep(widening_provider(self.HALF_WIDTHS), [0.0, 0.3, 0.6, 0.9])
        assert [r.uauc for r in sweep.reports] == [0.75, 1.0, 1.0, None]
        assert [r.abstention_rate for r in sweep.reports] == [0.0, 0.25, 0.5, 1.0]
        assert sweep.uauc_monotone
        assert sweep.stacked_levels == [0.0, 0.3, 0.6, 0.9]

    def test_overlap_grows_with_nested_intervals(self):
        sweep = confidence_sweep(widening_provider(self.HALF_WIDTHS), [0.0, 0.3, 0.6, 0.9])
        rates = [r.abstention_rate for r in sweep.reports]
        assert rates == sorted(rates)

    def test_point_level_prepended_to_stacked_series(self):
        sweep = confidence_sweep(widening_provider(self.HALF_WIDTHS), [0.3, 0.9])
        assert sweep.levels == [0.3, 0.9]
        assert sweep.stacked_levels == [0.0, 0.3, 0.9]
        assert sweep.stacked_rows()[0]["p_correct"] == 0.75

    def test_rows_flatten_bounds(self):
        sweep = confidence_sweep(widening_provider(self.HALF_WIDTHS), [0.0, 0.3], 0.05, 0.05)
        rows = sweep.to_rows()
        assert "bounds" not in rows[0]
        assert rows[0]["bound_p_pair"] == pytest.approx(0.0975)

    def test_single_point_level(self):
        sweep = confidence_sweep(widening_provider(self.HALF_WIDTHS), [0.0])
        report = sweep.reports[0]
        assert report.abstention_rate == 0.0
        assert report.auc_l == 0.75

    @pytest.mark.parametrize("levels", [[], [0.5, 0.3], [0.5, 0.5], [1.0], [-0.1]])
    def test_invalid_levels(self, levels):
        with pytest.raises(InputContractError):
            confidence_sweep(widening_provider(self.HALF_WIDTHS), levels)

    def test_provider_failure_names_level(self):
        def provider(level):
            raise InputContractError("labels misaligned")

        with pytest.raises(SweepLevelError) as excinfo:
            confidence_sweep(provider, [0.5])
        assert excinfo.value.level == 0.5
        assert isinstance(excinfo.value.cause, InputContractError)

    def test_empty_class_names_level(self):
        def provider(level):
            if level < 0.9:
                return ClassedIntervalDataset.from_pairs([(0.6, 0.8)], [(0.1, 0.2)])
            return ClassedIntervalDataset.from_pairs([(0.6, 0.8)], [])

        with pytest.raises(SweepLevelError) as excinfo:
            confidence_sweep(provider, [0.5, 0.9])
        assert excinfo.value.level == 0.9
        assert isinstance(excinfo.value.cause, EmptyClassError)

    def test_non_monotone_warning(self, caplog):
        half_widths = {0.0: 0.06, 0.5: 0.0}

        with caplog.at_level("WARNING", logger="intervalroc.metrics"):
            sweep = confidence_sweep(widening_provider(half_widths), [0.0, 0.5])
        assert not sweep.uauc_monotone
        assert "not monotone" in caplog.text


def random_dataset(rng):
    """Up to 500 intervals per class, a third of them on a coarse tie-heavy grid"""
    n_pos, n_neg = rng.integers(1, 501, size=2)
    grid = rng.choice([0, 1, 2])
    pos = np.sort(rng.uniform(0.0, 1.0, (n_pos, 2)), axis=1)
    neg = np.sort(rng.uniform(0.0, 1.0, (n_neg, 2)), axis=1)
    if grid:
        pos, neg = np.round(pos, grid), np.round(neg, grid)
    return ClassedIntervalDataset(pos[:, 0], pos[:, 1], neg[:, 0], neg[:, 1])


class TestRandomizedProperties:
    """Test counting identities over many randomized datasets."""

    def test_decomposition_identity(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            region = pairwise_counts(random_dataset(rng))
            assert region.correct + region.overlap + region.incorrect == region.pair_count
            total = region.p_correct + region.p_overlap + region.p_incorrect
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_fast_counts_match_brute_force(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            data = random_dataset(rng)
            region = pairwise_counts(data)
            assert (region.correct, region.incorrect) == brute_force_counts(data)

    @pytest.mark.parametrize("scale, shift", [(3.0, -1.0), (0.5, 0.25), (10.0, 4.0)])
    def test_affine_equivariance(self, scale, shift):
        rng = np.random.default_rng(11)
        for _ in range(50):
            data = random_dataset(rng)
            moved = data.affine(scale, shift)
            region = pairwise_counts(data)
            assert pairwise_counts(moved) == region
            assert uauc(pairwise_counts(moved)) == uauc(region)
            assert abstention_rate(pairwise_counts(moved)) == abstention_rate(region)

    @pytest.mark.parametrize("seed", range(50))
    def test_uauc_monotone_for_common_symmetric_width(self, seed):
        """Every wrongly ordered pair has a smaller score gap than every rightly ordered one."""
        rng = np.random.default_rng(seed)
        pos = np.concatenate((rng.uniform(0.45, 0.5, 5), rng.uniform(0.7, 1.0, 20)))
        neg = np.concatenate((rng.uniform(0.5, 0.55, 5), rng.uniform(0.0, 0.3, 20)))
        half_widths = {round(0.01 * k, 2): 0.02 * k for k in range(50)}

        def provider(level):
            w = half_widths[level]
            return ClassedIntervalDataset(pos - w, pos + w, neg - w, neg + w)

        sweep = confidence_sweep(provider, sorted(half_widths))
        defined = [r.uauc for r in sweep.reports if r.uauc is not None]
        assert all(b >= a for a, b in zip(defined, defined[1:]))
        assert sweep.uauc_monotone
        rates = [r.abstention_rate for r in sweep.reports]
        assert all(b >= a for a, b in zip(rates, rates[1:]))
