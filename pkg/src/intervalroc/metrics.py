"""
Pairwise-counting estimators for interval predictions

Counting over positive/negative pairs is the source of truth for AUC_L,
AUC_U, the three-region decomposition, uAUC and the abstention rate.  Curve
integration (see ``curves``) is the cross-check.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.stats import rankdata

from .curves import IntegrationRule, Pairing, build_curve, integrate_curve
from .errors import EmptyClassError, InputContractError, IntervalRocError, SweepLevelError
from .models import ClassedIntervalDataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThreeRegion:
    """Integer pair counts of the correct / overlap / incorrect split"""
    correct: int
    incorrect: int
    overlap: int
    pair_count: int

    def __post_init__(self) -> None:
        if self.pair_count <= 0:
            raise EmptyClassError("three-region decomposition needs at least one pair")
        if self.correct + self.incorrect + self.overlap != self.pair_count:
            raise InputContractError("region counts do not add up to the pair count")

    @property
    def p_correct(self) -> float:
        return self.correct / self.pair_count

    @property
    def p_incorrect(self) -> float:
        return self.incorrect / self.pair_count

    @property
    def p_overlap(self) -> float:
        return self.overlap / self.pair_count

    @property
    def decisive(self) -> int:
        return self.correct + self.incorrect


@dataclass(frozen=True)
class BoundInterval:
    """Range of the Bayes-optimal AUC compatible with the observed intervals"""
    raw_lower: float
    raw_upper: float
    p_pair: float
    alpha_pos: float
    alpha_neg: float

    @property
    def lower_bound(self) -> float:
        return min(1.0, max(0.0, self.raw_lower))

    @property
    def upper_bound(self) -> float:
        return min(1.0, max(0.0, self.raw_upper))

    @property
    def width(self) -> float:
        return self.raw_upper - self.raw_lower

    def contains(self, value: float) -> bool:
        return self.raw_lower <= value <= self.raw_upper

    def to_dict(self) -> Dict[str, float]:
        return {
            "lower": self.lower_bound,
            "upper": self.upper_bound,
            "p_pair": self.p_pair,
            "raw_lower": self.raw_lower,
            "raw_upper": self.raw_upper,
        }


@dataclass(frozen=True)
class EvaluationReport:
    """Headline metrics for one interval dataset"""
    auc_l: float
    auc_u: float
    three_region: ThreeRegion
    uauc: Optional[float]
    abstention_rate: float
    n_pos: int
    n_neg: int
    bounds: Optional[BoundInterval] = None
    confidence_level: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        """Stable JSON document; uAUC is null when no pair is decisive"""
        return {
            "auc_l": self.auc_l,
            "auc_u": self.auc_u,
            "p_correct": self.three_region.p_correct,
            "p_overlap": self.three_region.p_overlap,
            "p_incorrect": self.three_region.p_incorrect,
            "uauc": self.uauc,
            "abstention_rate": self.abstention_rate,
            "bounds": self.bounds.to_dict() if self.bounds is not None else None,
            "confidence_level": self.confidence_level,
            "n_pos": self.n_pos,
            "n_neg": self.n_neg,
        }


def pairwise_counts(data: ClassedIntervalDataset) -> ThreeRegion:
    """Count strictly-above, strictly-below and overlapping pairs

    Sorting the negative endpoints and binary-searching each positive endpoint
    gives O((n1 + n0) log(n1 + n0)) with integer counts, so the result equals
    the brute-force double loop exactly.
    """
    data.require_both_classes()
    neg_upper = np.sort(data.neg_upper)
    neg_lower = np.sort(data.neg_lower)

    # L_1 > U_0: negatives whose upper is strictly below the positive lower
    correct = int(np.searchsorted(neg_upper, data.pos_lower, side="left").sum())
    # U_1 < L_0: negatives whose lower is strictly above the positive upper
    at_or_below = np.searchsorted(neg_lower, data.pos_upper, side="right")
    incorrect = int((data.n_neg - at_or_below).sum())

    pair_count = data.pair_count
    return ThreeRegion(
        correct=correct,
        incorrect=incorrect,
        overlap=pair_count - correct - incorrect,
        pair_count=pair_count,
    )


def auc_l(data: ClassedIntervalDataset) -> float:
    """AUC_L = P(I_1 > I_0)"""
    return pairwise_counts(data).p_correct


def auc_u(data: ClassedIntervalDataset) -> float:
    """AUC_U = 1 - P(I_1 < I_0)"""
    return 1.0 - pairwise_counts(data).p_incorrect


def uauc(region: ThreeRegion) -> Optional[float]:
    """Share of correct orderings among decisive pairs; None if none are decisive"""
    if region.decisive == 0:
        return None
    return region.correct / region.decisive


def abstention_rate(region: ThreeRegion) -> float:
    return region.p_overlap


def optimal_auc_bounds(
    auc_l: float, auc_u: float, alpha_pos: float, alpha_neg: float
) -> BoundInterval:
    """[AUC_L - p_pair, AUC_U + p_pair] for class-conditional miscoverage rates"""
    for name, value in (("alpha_pos", alpha_pos), ("alpha_neg", alpha_neg)):
        if not (0.0 <= value <= 1.0):
            raise InputContractError(f"{name} must lie in [0, 1], got {value}")
    for name, value in (("auc_l", auc_l), ("auc_u", auc_u)):
        if not (0.0 <= value <= 1.0):
            raise InputContractError(f"{name} must lie in [0, 1], got {value}")

    p_pair = alpha_pos + alpha_neg - alpha_pos * alpha_neg
    return BoundInterval(
        raw_lower=auc_l - p_pair,
        raw_upper=auc_u + p_pair,
        p_pair=p_pair,
        alpha_pos=alpha_pos,
        alpha_neg=alpha_neg,
    )


def evaluate(
    data: ClassedIntervalDataset,
    confidence_level: Optional[float] = None,
    alpha_pos: Optional[float] = None,
    alpha_neg: Optional[float] = None,
) -> EvaluationReport:
    """Compute every headline metric for one dataset

    Bounds are attached only when both miscoverage rates are supplied.
    """
    if (alpha_pos is None) != (alpha_neg is None):
        raise InputContractError("supply both alpha_pos and alpha_neg, or neither")

    region = pairwise_counts(data)
    lower_auc = region.p_correct
    upper_auc = 1.0 - region.p_incorrect
    bounds = None
    if alpha_pos is not None and alpha_neg is not None:
        bounds = optimal_auc_bounds(lower_auc, upper_auc, alpha_pos, alpha_neg)

    return EvaluationReport(
        auc_l=lower_auc,
        auc_u=upper_auc,
        three_region=region,
        uauc=uauc(region),
        abstention_rate=abstention_rate(region),
        n_pos=data.n_pos,
        n_neg=data.n_neg,
        bounds=bounds,
        confidence_level=confidence_level,
    )


def curve_diagnostics(
    data: ClassedIntervalDataset,
    rule: IntegrationRule = IntegrationRule.TRAPEZOID,
) -> Dict[str, float]:
    """Integrated curve areas next to the counting estimates and their gaps"""
    region = pairwise_counts(data)
    area_l = integrate_curve(build_curve(data, Pairing.STRICT), rule)
    area_u = integrate_curve(build_curve(data, Pairing.PERMISSIVE), rule)
    count_l = region.p_correct
    count_u = 1.0 - region.p_incorrect
    return {
        "integration_rule": rule.value,
        "auc_l_integrated": area_l,
        "auc_l_counted": count_l,
        "auc_l_delta": abs(area_l - count_l),
        "auc_u_integrated": area_u,
        "auc_u_counted": count_u,
        "auc_u_delta": abs(area_u - count_u),
        "region_sum": region.p_correct + region.p_overlap + region.p_incorrect,
    }


def classical_auc(scores: Iterable[float], labels: Iterable[int]) -> float:
    """Mann-Whitney AUC with half credit for exact score ties"""
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    if s.shape != y.shape:
        raise InputContractError("scores and labels are misaligned")
    n_pos = int(np.count_nonzero(y == 1))
    n_neg = int(np.count_nonzero(y == 0))
    if n_pos + n_neg != y.shape[0]:
        raise InputContractError("labels must be binary 0/1")
    if n_pos == 0 or n_neg == 0:
        raise EmptyClassError(f"need both classes, got {n_pos} positives and {n_neg} negatives")

    ranks = rankdata(s, method="average")
    rank_sum = float(ranks[y == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


IntervalProvider = Callable[[float], ClassedIntervalDataset]


@dataclass
class ConfidenceSweep:
    """One EvaluationReport per confidence level, plus the stacked series"""
    levels: List[float]
    reports: List[EvaluationReport]
    stacked_levels: List[float] = field(default_factory=list)
    stacked_regions: List[ThreeRegion] = field(default_factory=list)

    @property
    def uauc_monotone(self) -> bool:
        """Whether uAUC never decreases across levels where it is defined"""
        values = [r.uauc for r in self.reports if r.uauc is not None]
        return all(b >= a for a, b in zip(values, values[1:]))

    def to_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for report in self.reports:
            row = report.to_dict()
            bounds = row.pop("bounds")
            for key in ("lower", "upper", "p_pair"):
                row[f"bound_{key}"] = bounds[key] if bounds else None
            rows.append(row)
        return rows

    def stacked_rows(self) -> List[Dict[str, float]]:
        return [
            {
                "confidence_level": level,
                "p_correct": region.p_correct,
                "p_overlap": region.p_overlap,
                "p_incorrect": region.p_incorrect,
            }
            for level, region in zip(self.stacked_levels, self.stacked_regions)
        ]


def _validate_levels(levels: Sequence[float]) -> None:
    if not levels:
        raise InputContractError("confidence sweep needs at least one level")
    for level in levels:
        if not (0.0 <= level < 1.0) or math.isnan(level):
            raise InputContractError(f"confidence level {level} outside [0, 1)")
    for a, b in zip(levels, levels[1:]):
        if not b > a:
            raise InputContractError("confidence levels must be strictly increasing")


def confidence_sweep(
    interval_source: IntervalProvider,
    levels: Sequence[float],
    alpha_pos: Optional[float] = None,
    alpha_neg: Optional[float] = None,
) -> ConfidenceSweep:
    """Evaluate the same predictions at several interval confidence levels

    The stacked three-region series always starts at level 0, the point
    prediction case, even when 0 is not one of the requested rows.
    """
    levels = [float(level) for level in levels]
    _validate_levels(levels)

    def dataset_at(level: float) -> ClassedIntervalDataset:
        try:
            return interval_source(level)
        except Exception as exc:
            raise SweepLevelError(level, exc) from exc

    reports = []
    for level in levels:
        data = dataset_at(level)
        try:
            report = evaluate(data, level, alpha_pos, alpha_neg)
        except IntervalRocError as exc:
            raise SweepLevelError(level, exc) from exc
        logger.info(
            "level %.3f: AUC_L=%.4f AUC_U=%.4f AR=%.4f",
            level, report.auc_l, report.auc_u, report.abstention_rate,
        )
        reports.append(report)

    sweep = ConfidenceSweep(levels=levels, reports=reports)
    if levels[0] > 0.0:
        sweep.stacked_levels.append(0.0)
        sweep.stacked_regions.append(pairwise_counts(dataset_at(0.0)))
    sweep.stacked_levels.extend(levels)
    sweep.stacked_regions.extend(r.three_region for r in reports)

    if not sweep.uauc_monotone:
        logger.warning("uAUC is not monotone across the requested confidence levels")
    return sweep
