"""
Rate functions and the two ROC-style curves of interval predictions

The strict curve pairs TPR_L with FPR_U and integrates to AUC_L; the
permissive curve pairs TPR_U with FPR_L and integrates to AUC_U.  Rates are
right-continuous step functions that only change at interval endpoints, so
evaluating them at the endpoint knots loses nothing.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, NamedTuple

import numpy as np

from .errors import InputContractError
from .models import ClassedIntervalDataset

logger = logging.getLogger(__name__)


class Pairing(Enum):
    """Which rate functions a curve pairs"""
    STRICT = "strict"          # x = FPR_U, y = TPR_L
    PERMISSIVE = "permissive"  # x = FPR_L, y = TPR_U


class IntegrationRule(Enum):
    """How curve areas are integrated"""
    TRAPEZOID = "trapezoid"
    STEP = "step"


@dataclass(frozen=True)
class RateQuadruple:
    """The four empirical rates at one threshold"""
    tpr_l: float
    tpr_u: float
    fpr_l: float
    fpr_u: float


class CurvePoint(NamedTuple):
    x: float
    y: float
    threshold: float


@dataclass(frozen=True, eq=False)
class RocCurve:
    """One ROC-style curve, stored from (0, 0) to (1, 1)

    Points are ordered by descending threshold, which is increasing x: the
    first point sits at the +inf sentinel and the last at the -inf sentinel.
    """
    pairing: Pairing
    thresholds: np.ndarray
    x: np.ndarray
    y: np.ndarray
    orientation: str = "descending-threshold"

    def __len__(self) -> int:
        return int(self.x.shape[0])

    @property
    def points(self) -> Iterator[CurvePoint]:
        for x, y, t in zip(self.x, self.y, self.thresholds):
            yield CurvePoint(float(x), float(y), float(t))

    def to_rows(self) -> Iterator[Dict[str, object]]:
        """CSV rows in the (threshold, x, y, pairing) layout"""
        for point in self.points:
            yield {
                "threshold": point.threshold,
                "x": point.x,
                "y": point.y,
                "pairing": self.pairing.value,
            }


def threshold_grid(data: ClassedIntervalDataset) -> np.ndarray:
    """Sorted unique endpoints of both classes bracketed by -inf and +inf"""
    if data.is_empty:
        raise InputContractError("cannot build a threshold grid from an empty dataset")
    knots = np.unique(data.endpoints())
    return np.concatenate(([-math.inf], knots, [math.inf]))


def _fraction_above(sorted_values: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Fraction of values strictly greater than each threshold"""
    n = sorted_values.shape[0]
    above = n - np.searchsorted(sorted_values, thresholds, side="right")
    return above / n


def _rates_on(data: ClassedIntervalDataset, thresholds: np.ndarray) -> Dict[str, np.ndarray]:
    data.require_both_classes()
    return {
        "tpr_l": _fraction_above(np.sort(data.pos_lower), thresholds),
        "tpr_u": _fraction_above(np.sort(data.pos_upper), thresholds),
        "fpr_l": _fraction_above(np.sort(data.neg_lower), thresholds),
        "fpr_u": _fraction_above(np.sort(data.neg_upper), thresholds),
    }


def rates_at(data: ClassedIntervalDataset, t: float) -> RateQuadruple:
    """TPR_L, TPR_U, FPR_L, FPR_U at threshold t"""
    rates = _rates_on(data, np.asarray([t], dtype=float))
    return RateQuadruple(**{name: float(values[0]) for name, values in rates.items()})


def build_curve(data: ClassedIntervalDataset, pairing: Pairing) -> RocCurve:
    """Evaluate one curve at every knot of the threshold grid"""
    grid = threshold_grid(data)[::-1]  # descending threshold, increasing x
    rates = _rates_on(data, grid)
    if pairing is Pairing.STRICT:
        x, y = rates["fpr_u"], rates["tpr_l"]
    else:
        x, y = rates["fpr_l"], rates["tpr_u"]
    for array in (grid, x, y):
        array.setflags(write=False)
    logger.debug("built %s curve with %d points", pairing.value, grid.shape[0])
    return RocCurve(pairing=pairing, thresholds=grid, x=x, y=y)


def integrate_curve(
    curve: RocCurve, rule: IntegrationRule = IntegrationRule.TRAPEZOID
) -> float:
    """Area under a curve, summed left to right over its segments

    The step rule is exact against pairwise counting.  On a segment where x
    and y jump together it takes the lower corner for the strict pairing
    (touching endpoints are not a correct ordering) and the upper corner for
    the permissive pairing (touching endpoints are not an incorrect ordering).
    """
    if len(curve) < 2:
        raise InputContractError("a curve needs at least two points to integrate")
    dx = np.diff(curve.x)
    if np.any(dx < 0):
        raise InputContractError("curve x-coordinates must be non-decreasing")

    if rule is IntegrationRule.TRAPEZOID:
        heights = (curve.y[:-1] + curve.y[1:]) / 2.0
    elif curve.pairing is Pairing.STRICT:
        heights = curve.y[:-1]
    else:
        heights = curve.y[1:]

    area = 0.0
    for width, height in zip(dx.tolist(), heights.tolist()):
        area += width * height
    return area
