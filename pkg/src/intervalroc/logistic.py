"""
L2-regularised logistic regression fitted by iteratively reweighted least squares

Features are z-scored with statistics from the training rows only; the
intercept is never penalised.  The objective is the mean negative
log-likelihood plus (l2 / 2) * ||w||^2, so l2 = 1 / n_train matches the
unit-strength default of common toolkits.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit

from .config import LogisticConfig
from .errors import ConvergenceError, InputContractError
from .tabular import TabularDataset

logger = logging.getLogger(__name__)

_ARMIJO = 1e-4
_MAX_HALVINGS = 30


@dataclass(frozen=True, eq=False)
class LogisticModel:
    """Fitted weights on standardised features plus the standardisation itself"""
    weights: np.ndarray
    intercept: float
    means: np.ndarray
    scales: np.ndarray
    kept: np.ndarray
    feature_names: Tuple[str, ...]
    l2: float
    iterations: int
    gradient_norm: float

    @property
    def dropped_features(self) -> Tuple[str, ...]:
        return tuple(name for name, keep in zip(self.feature_names, self.kept) if not keep)

    def standardize(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=float)
        if x.ndim != 2 or x.shape[1] != len(self.feature_names):
            raise InputContractError(
                f"expected {len(self.feature_names)} feature columns, got shape {x.shape}"
            )
        return (x[:, self.kept] - self.means[self.kept]) / self.scales[self.kept]

    def decision_function(self, features: np.ndarray) -> np.ndarray:
        return self.intercept + self.standardize(features) @ self.weights

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        """P(Y = 1 | x) for each row"""
        return expit(self.decision_function(features))


def _objective(design: np.ndarray, y: np.ndarray, theta: np.ndarray, penalty: np.ndarray) -> float:
    eta = design @ theta
    nll = np.mean(np.logaddexp(0.0, eta) - y * eta)
    return float(nll + 0.5 * np.sum(penalty * theta * theta))


def fit_logistic(train: TabularDataset, config: Optional[LogisticConfig] = None) -> LogisticModel:
    """Fit on ``train`` until the gradient norm drops to ``config.tol``

    Constant features cannot be standardised; they are dropped with a warning
    and listed in ``LogisticModel.dropped_features``.
    """
    config = config or LogisticConfig()
    if not train.has_both_classes():
        raise InputContractError("logistic regression needs both classes in the training rows")

    x = train.features
    y = train.labels.astype(float)
    n = train.n_rows

    means = x.mean(axis=0)
    scales = x.std(axis=0)
    kept = scales > 0.0
    for name in np.asarray(train.feature_names)[~kept]:
        logger.warning("dropping constant feature %s", name)

    z = (x[:, kept] - means[kept]) / scales[kept]
    design = np.hstack((np.ones((n, 1)), z))
    l2 = config.resolve_l2(n)
    penalty = np.full(design.shape[1], l2)
    penalty[0] = 0.0

    theta = np.zeros(design.shape[1])
    gradient_norm = np.inf
    for iteration in range(config.max_iter + 1):
        p = expit(design @ theta)
        gradient = design.T @ (p - y) / n + penalty * theta
        gradient_norm = float(np.linalg.norm(gradient))
        logger.debug("IRLS iteration %d: gradient norm %.3e", iteration, gradient_norm)
        if gradient_norm <= config.tol:
            break
        if iteration == config.max_iter:
            raise ConvergenceError("logistic regression did not converge", gradient_norm, iteration)

        w = p * (1.0 - p)
        hessian = (design.T * w) @ design / n + np.diag(penalty)
        try:
            step = np.linalg.solve(hessian, gradient)
        except np.linalg.LinAlgError:
            raise ConvergenceError("singular IRLS system", gradient_norm, iteration) from None

        current = _objective(design, y, theta, penalty)
        slope = float(gradient @ step)
        scale = 1.0
        for _ in range(_MAX_HALVINGS):
            candidate = theta - scale * step
            if _objective(design, y, candidate, penalty) <= current - _ARMIJO * scale * slope:
                break
            scale *= 0.5
        else:
            # no measurable decrease left at float precision; keep the Newton step
            candidate = theta - step
        theta = candidate

    return LogisticModel(
        weights=theta[1:].copy(),
        intercept=float(theta[0]),
        means=means,
        scales=np.where(kept, scales, 1.0),
        kept=kept,
        feature_names=train.feature_names,
        l2=l2,
        iterations=iteration,
        gradient_norm=gradient_norm,
    )
