"""
Known-posterior synthetic world for checking the optimal-AUC bounds

Class-conditionals are N(mu0, 1) and N(mu1, 1) with equal priors, so the
posterior eta(x) has a closed form and AUC* can be computed exactly on every
sample.  Intervals are centred on eta for a (1 - alpha) share of each class
and deliberately shifted off eta for the rest.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterator, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from numpy.typing import ArrayLike
from scipy.special import expit
from scipy.stats import norm

from .errors import InputContractError
from .metrics import classical_auc, optimal_auc_bounds, pairwise_counts
from .models import ClassedIntervalDataset, IntervalPrediction

logger = logging.getLogger(__name__)

EPSILON_RANGE = (0.01, 0.1)
DEFAULT_N_PER_CLASS = 20_000


@dataclass(frozen=True)
class SyntheticConfig:
    mu0: float = 0.0
    mu1: float = 1.0
    n_per_class: int = DEFAULT_N_PER_CLASS
    alpha: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_per_class < 2:
            raise InputContractError("n_per_class must be at least 2")
        if not (0.0 <= self.alpha < 1.0):
            raise InputContractError(f"alpha must be in [0, 1), got {self.alpha}")
        if not (math.isfinite(self.mu0) and math.isfinite(self.mu1)):
            raise InputContractError("class means must be finite")
        if self.seed < 0:
            raise InputContractError("seed must be non-negative")


@dataclass(frozen=True)
class SyntheticSample:
    """One draw with its exact posterior and, once attached, its interval"""
    x: float
    label: int
    eta: float
    interval: Optional[IntervalPrediction] = None
    covered: Optional[bool] = None


@dataclass(frozen=True, eq=False)
class SyntheticWorld:
    """Column-wise storage of the samples; intervals are None until attached"""
    x: np.ndarray
    labels: np.ndarray
    eta: np.ndarray
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    half_width: Optional[float] = None

    @property
    def has_intervals(self) -> bool:
        return self.lower is not None and self.upper is not None

    @property
    def covered(self) -> Optional[np.ndarray]:
        if not self.has_intervals:
            return None
        return (self.lower <= self.eta) & (self.eta <= self.upper)

    def __len__(self) -> int:
        return int(self.x.shape[0])

    def samples(self) -> Iterator[SyntheticSample]:
        covered = self.covered
        for i in range(len(self)):
            interval = None
            if self.has_intervals:
                interval = IntervalPrediction(float(self.lower[i]), float(self.upper[i]))
            yield SyntheticSample(
                x=float(self.x[i]),
                label=int(self.labels[i]),
                eta=float(self.eta[i]),
                interval=interval,
                covered=bool(covered[i]) if covered is not None else None,
            )

    def miscoverage(self, label: int) -> float:
        """Empirical share of class ``label`` whose interval misses eta"""
        if not self.has_intervals:
            raise InputContractError("intervals have not been attached")
        mask = self.labels == label
        return float(np.mean(~self.covered[mask]))

    def interval_dataset(self) -> ClassedIntervalDataset:
        if not self.has_intervals:
            raise InputContractError("intervals have not been attached")
        return ClassedIntervalDataset.from_labels(self.labels, self.lower, self.upper)


def posterior_eta(x: ArrayLike, mu0: float, mu1: float) -> Any:
    """eta(x) = P(Y = 1 | x) for equal-prior, unit-variance Gaussians"""
    return expit((mu1 - mu0) * np.asarray(x, dtype=float) - (mu1 ** 2 - mu0 ** 2) / 2.0)


def generate_world(config: SyntheticConfig) -> SyntheticWorld:
    """n_per_class draws from each class-conditional, negatives first"""
    rng = np.random.default_rng([config.seed, 0])
    x0 = rng.normal(config.mu0, 1.0, size=config.n_per_class)
    x1 = rng.normal(config.mu1, 1.0, size=config.n_per_class)
    x = np.concatenate((x0, x1))
    labels = np.concatenate((np.zeros(config.n_per_class, int), np.ones(config.n_per_class, int)))
    return SyntheticWorld(x=x, labels=labels, eta=posterior_eta(x, config.mu0, config.mu1))


def half_width(eta: np.ndarray, alpha: float) -> float:
    """delta = 0.05 + 0.3 alpha + 0.1 std(eta), std over the pooled sample"""
    return 0.05 + 0.3 * alpha + 0.1 * float(np.std(eta))


def build_intervals(world: SyntheticWorld, alpha: float, seed: int) -> SyntheticWorld:
    """Attach [eta - delta, eta + delta] intervals with exact per-class miscoverage

    round(alpha * n_c) samples of each class are shifted by delta + eps, eps
    drawn per sample from Uniform(0.01, 0.1), in a random direction.  The
    direction is flipped toward the interior when the shifted interval would
    fall entirely outside [0, 1].  Endpoints are then clipped to [0, 1].
    """
    if not (0.0 <= alpha <= 1.0):
        raise InputContractError(f"alpha must be in [0, 1], got {alpha}")
    rng = np.random.default_rng([seed, 1])
    delta = half_width(world.eta, alpha)
    centre = world.eta.copy()

    for label in (0, 1):
        members = np.flatnonzero(world.labels == label)
        n_shift = int(round(alpha * members.size))
        if n_shift == 0:
            continue
        shifted = rng.choice(members, size=n_shift, replace=False)
        eps = rng.uniform(*EPSILON_RANGE, size=n_shift)
        sign = rng.choice((-1.0, 1.0), size=n_shift)
        eta = world.eta[shifted]
        offset = delta + eps
        # near edge of the shifted interval is eta + sign * eps
        outside = (eta + sign * eps > 1.0) | (eta + sign * eps < 0.0)
        sign = np.where(outside, -sign, sign)
        centre[shifted] = eta + sign * offset

    lower = np.clip(centre - delta, 0.0, 1.0)
    upper = np.clip(centre + delta, 0.0, 1.0)
    logger.debug("alpha %.3f: half-width %.4f", alpha, delta)
    return replace(world, lower=lower, upper=upper, half_width=delta)


def true_auc_star(world: SyntheticWorld) -> float:
    """P(eta(X_1) > eta(X_0)) over all sample pairs, half credit for ties"""
    return classical_auc(world.eta, world.labels)


def analytic_auc_star(mu0: float, mu1: float) -> float:
    """Population AUC* = Phi((mu1 - mu0) / sqrt(2))"""
    return float(norm.cdf((mu1 - mu0) / math.sqrt(2.0)))


@dataclass(frozen=True)
class BoundValidationRow:
    alpha: float
    auc_l: float
    auc_u: float
    p_pair: float
    lower_bound: float
    upper_bound: float
    auc_star: float
    contained: bool
    raw_lower: float = 0.0
    raw_upper: float = 0.0
    realized_alpha_pos: float = 0.0
    realized_alpha_neg: float = 0.0
    half_width: float = 0.0

    @property
    def width(self) -> float:
        return self.raw_upper - self.raw_lower

    def to_row(self) -> Dict[str, Any]:
        """The CSV columns of the validation table"""
        return {
            "alpha": self.alpha,
            "auc_l": self.auc_l,
            "auc_u": self.auc_u,
            "p_pair": self.p_pair,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "auc_star": self.auc_star,
            "contained": self.contained,
        }


@dataclass
class BoundValidation:
    rows: List[BoundValidationRow]
    auc_star: float
    analytic_auc_star: float
    config: SyntheticConfig
    extras: Dict[str, Any] = field(default_factory=dict)

    @property
    def all_contained(self) -> bool:
        return all(row.contained for row in self.rows)

    @property
    def widths_monotone(self) -> bool:
        widths = [row.width for row in sorted(self.rows, key=lambda r: r.alpha)]
        return all(b >= a for a, b in zip(widths, widths[1:]))


def _validate_alpha(
    world: SyntheticWorld, auc_star: float, alpha: float, seed: int
) -> BoundValidationRow:
    attached = build_intervals(world, alpha, seed)
    region = pairwise_counts(attached.interval_dataset())
    lower_auc = region.p_correct
    upper_auc = 1.0 - region.p_incorrect
    bounds = optimal_auc_bounds(lower_auc, upper_auc, alpha, alpha)
    row = BoundValidationRow(
        alpha=alpha,
        auc_l=lower_auc,
        auc_u=upper_auc,
        p_pair=bounds.p_pair,
        lower_bound=bounds.lower_bound,
        upper_bound=bounds.upper_bound,
        auc_star=auc_star,
        contained=bounds.contains(auc_star),
        raw_lower=bounds.raw_lower,
        raw_upper=bounds.raw_upper,
        realized_alpha_pos=attached.miscoverage(1),
        realized_alpha_neg=attached.miscoverage(0),
        half_width=attached.half_width or 0.0,
    )
    logger.info(
        "alpha %.3f: bounds [%.4f, %.4f] AUC*=%.4f contained=%s",
        alpha, row.lower_bound, row.upper_bound, auc_star, row.contained,
    )
    return row


def validate_bounds(
    template: SyntheticConfig, alphas: Sequence[float], workers: int = 1
) -> BoundValidation:
    """One BoundValidationRow per alpha over a single synthetic world

    The world comes from ``template.seed``; the intervals for the alpha at
    index i use a seed derived from (template.seed, i).
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise InputContractError("validate_bounds needs at least one alpha")
    for alpha in alphas:
        if not (0.0 <= alpha < 1.0):
            raise InputContractError(f"alpha {alpha} outside [0, 1)")

    world = generate_world(template)
    auc_star = true_auc_star(world)
    seeds = [
        int(np.random.SeedSequence([template.seed, i]).generate_state(1, dtype=np.uint32)[0])
        for i in range(len(alphas))
    ]

    def run(i: int) -> BoundValidationRow:
        return _validate_alpha(world, auc_star, alphas[i], seeds[i])

    if workers > 1:
        rows = Parallel(n_jobs=workers, prefer="threads")(
            delayed(run)(i) for i in range(len(alphas))
        )
    else:
        rows = [run(i) for i in range(len(alphas))]

    return BoundValidation(
        rows=rows,
        auc_star=auc_star,
        analytic_auc_star=analytic_auc_star(template.mu0, template.mu1),
        config=template,
        extras={"alpha_seeds": seeds},
    )
