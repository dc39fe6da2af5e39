"""
Core data models for interval-valued risk predictions

An interval prediction (L, U) brackets the event probability of one input.
Comparisons between intervals, and between an interval and a threshold, are
strict: touching endpoints are never an ordering.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import EmptyClassError, InputContractError


class PairOrdering(Enum):
    """Outcome of comparing a positive interval against a negative one"""
    STRICTLY_ABOVE = "above"    # L_1 > U_0, confidently correct
    STRICTLY_BELOW = "below"    # U_1 < L_0, confidently incorrect
    OVERLAP = "overlap"


class ThresholdPosition(Enum):
    """Where an interval sits relative to a scalar threshold"""
    ABOVE = "above"
    BELOW = "below"
    CONTAINS = "contains"


@dataclass(frozen=True)
class IntervalPrediction:
    """One interval-valued risk score; lower <= upper, both finite"""
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise InputContractError(
                f"interval endpoints must be finite, got ({self.lower}, {self.upper})"
            )
        if self.lower > self.upper:
            raise InputContractError(
                f"interval lower {self.lower} exceeds upper {self.upper}"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    def contains(self, value: float) -> bool:
        """Closed containment, used for coverage bookkeeping"""
        return self.lower <= value <= self.upper


def make_interval(lower: float, upper: float) -> IntervalPrediction:
    """Validated constructor; rejects non-finite input and lower > upper"""
    try:
        lower_f, upper_f = float(lower), float(upper)
    except (TypeError, ValueError) as exc:
        raise InputContractError(f"interval endpoints must be numbers: {exc}") from exc
    return IntervalPrediction(lower_f, upper_f)


def compare_pair(a: IntervalPrediction, b: IntervalPrediction) -> PairOrdering:
    """Order interval a against interval b with strict inequalities"""
    if a.lower > b.upper:
        return PairOrdering.STRICTLY_ABOVE
    if a.upper < b.lower:
        return PairOrdering.STRICTLY_BELOW
    return PairOrdering.OVERLAP


def compare_threshold(interval: IntervalPrediction, t: float) -> ThresholdPosition:
    """Place an interval against threshold t; the whole interval must clear it"""
    if not math.isfinite(t):
        raise InputContractError(f"threshold must be finite, got {t}")
    if interval.lower > t:
        return ThresholdPosition.ABOVE
    if interval.upper < t:
        return ThresholdPosition.BELOW
    return ThresholdPosition.CONTAINS


def _as_endpoint_array(values: Iterable[float], name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float)
    if array.ndim != 1:
        raise InputContractError(f"{name} must be one-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InputContractError(f"{name} contains non-finite endpoints")
    array = array.copy()
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ClassedIntervalDataset:
    """Positive-class and negative-class interval collections

    Endpoints are held column-wise as read-only numpy arrays so the pairwise
    kernels can sort and search them directly.  ``positives``/``negatives``
    materialise IntervalPrediction objects on demand.
    """
    pos_lower: np.ndarray
    pos_upper: np.ndarray
    neg_lower: np.ndarray
    neg_upper: np.ndarray

    def __post_init__(self) -> None:
        for name in ("pos_lower", "pos_upper", "neg_lower", "neg_upper"):
            object.__setattr__(self, name, _as_endpoint_array(getattr(self, name), name))

        if self.pos_lower.shape != self.pos_upper.shape:
            raise InputContractError("positive lower/upper arrays differ in length")
        if self.neg_lower.shape != self.neg_upper.shape:
            raise InputContractError("negative lower/upper arrays differ in length")

        for label, lower, upper in (
            ("positive", self.pos_lower, self.pos_upper),
            ("negative", self.neg_lower, self.neg_upper),
        ):
            bad = np.flatnonzero(lower > upper)
            if bad.size:
                i = int(bad[0])
                raise InputContractError(
                    f"{label} interval {i} has lower {lower[i]} > upper {upper[i]}"
                )

    @classmethod
    def from_intervals(
        cls,
        positives: Sequence[IntervalPrediction],
        negatives: Sequence[IntervalPrediction],
    ) -> "ClassedIntervalDataset":
        """Build from IntervalPrediction sequences"""
        return cls(
            pos_lower=[i.lower for i in positives],
            pos_upper=[i.upper for i in positives],
            neg_lower=[i.lower for i in negatives],
            neg_upper=[i.upper for i in negatives],
        )

    @classmethod
    def from_pairs(
        cls,
        positives: Iterable[Tuple[float, float]],
        negatives: Iterable[Tuple[float, float]],
    ) -> "ClassedIntervalDataset":
        """Build from plain (lower, upper) tuples"""
        pos = np.asarray(list(positives), dtype=float).reshape(-1, 2)
        neg = np.asarray(list(negatives), dtype=float).reshape(-1, 2)
        return cls(pos[:, 0], pos[:, 1], neg[:, 0], neg[:, 1])

    @classmethod
    def from_labels(
        cls,
        labels: Iterable[int],
        lower: Iterable[float],
        upper: Iterable[float],
    ) -> "ClassedIntervalDataset":
        """Partition aligned (label, lower, upper) columns by label"""
        y = np.asarray(labels)
        lo = np.asarray(lower, dtype=float)
        hi = np.asarray(upper, dtype=float)
        if not (y.shape == lo.shape == hi.shape):
            raise InputContractError(
                f"labels ({y.shape[0] if y.ndim else 0}) and interval endpoints "
                f"({lo.shape[0] if lo.ndim else 0}) are misaligned"
            )
        if not np.all(np.isin(y, (0, 1))):
            raise InputContractError("labels must be binary 0/1")
        pos = y == 1
        return cls(lo[pos], hi[pos], lo[~pos], hi[~pos])

    @property
    def n_pos(self) -> int:
        return int(self.pos_lower.shape[0])

    @property
    def n_neg(self) -> int:
        return int(self.neg_lower.shape[0])

    @property
    def pair_count(self) -> int:
        return self.n_pos * self.n_neg

    @property
    def positives(self) -> Tuple[IntervalPrediction, ...]:
        return tuple(
            IntervalPrediction(float(lo), float(hi))
            for lo, hi in zip(self.pos_lower, self.pos_upper)
        )

    @property
    def negatives(self) -> Tuple[IntervalPrediction, ...]:
        return tuple(
            IntervalPrediction(float(lo), float(hi))
            for lo, hi in zip(self.neg_lower, self.neg_upper)
        )

    @property
    def is_empty(self) -> bool:
        return self.n_pos == 0 and self.n_neg == 0

    def require_both_classes(self) -> None:
        """Raise EmptyClassError unless both classes have at least one interval"""
        if self.n_pos == 0 or self.n_neg == 0:
            raise EmptyClassError(
                f"need both classes, got {self.n_pos} positives and {self.n_neg} negatives"
            )

    def endpoints(self) -> np.ndarray:
        """Every lower and upper endpoint of both classes, unsorted"""
        return np.concatenate((self.pos_lower, self.pos_upper, self.neg_lower, self.neg_upper))

    def affine(self, scale: float, shift: float) -> "ClassedIntervalDataset":
        """Apply x -> scale * x + shift to every endpoint (scale > 0)"""
        if not scale > 0:
            raise InputContractError("affine scale must be strictly positive")
        return ClassedIntervalDataset(
            self.pos_lower * scale + shift,
            self.pos_upper * scale + shift,
            self.neg_lower * scale + shift,
            self.neg_upper * scale + shift,
        )
