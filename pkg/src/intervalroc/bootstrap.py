"""
Bootstrap prediction matrices and percentile prediction intervals

Replicate b draws its resample from a seed derived from (master_seed, b,
attempt), so every replicate is independent of execution order and the
matrix is identical whether replicates run serially or on joblib threads.
"""

import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from .config import QUANTILE_RULES, LogisticConfig
from .errors import InputContractError, ResampleError
from .logistic import fit_logistic
from .metrics import classical_auc
from .models import ClassedIntervalDataset
from .tabular import TabularDataset, impute_zero_as_missing, stratified_split

logger = logging.getLogger(__name__)

MAX_RESAMPLE_RETRIES = 100


@dataclass(frozen=True, eq=False)
class PredictionMatrix:
    """B bootstrap replicates (rows) by m test instances (columns)"""
    values: np.ndarray
    replicate_seeds: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise InputContractError(f"prediction matrix must be B x m, got shape {values.shape}")
        if not np.all((values >= 0.0) & (values <= 1.0)):
            raise InputContractError("prediction matrix entries must lie in [0, 1]")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "replicate_seeds", tuple(int(s) for s in self.replicate_seeds))

    @property
    def n_replicates(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_instances(self) -> int:
        return int(self.values.shape[1])

    def mean_predictions(self) -> np.ndarray:
        return self.values.mean(axis=0)

    def to_csv(self) -> str:
        """One row per replicate, 17 significant digits, no header"""
        buffer = io.StringIO()
        for row in self.values:
            buffer.write(",".join(f"{value:.17g}" for value in row))
            buffer.write("\n")
        return buffer.getvalue()

    @classmethod
    def read_csv(cls, path: Union[str, Path]) -> "PredictionMatrix":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Prediction matrix not found: {path}")
        try:
            values = np.loadtxt(path, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise InputContractError(f"malformed prediction matrix {path}: {exc}") from exc
        return cls(values)


def replicate_seed(master_seed: int, replicate: int, attempt: int = 0) -> int:
    """Counter-based seed for one resampling attempt of one replicate"""
    if master_seed < 0:
        raise InputContractError("master seed must be non-negative")
    sequence = np.random.SeedSequence([master_seed, replicate, attempt])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def draw_resample(n_rows: int, seed: int) -> np.ndarray:
    """n-with-replacement row indices"""
    return np.random.default_rng(seed).integers(0, n_rows, size=n_rows)


def _fit_replicate(
    train: TabularDataset,
    test_features: np.ndarray,
    replicate: int,
    master_seed: int,
    config: LogisticConfig,
) -> Tuple[int, np.ndarray]:
    for attempt in range(MAX_RESAMPLE_RETRIES + 1):
        seed = replicate_seed(master_seed, replicate, attempt)
        resample = train.subset(draw_resample(train.n_rows, seed))
        if resample.has_both_classes():
            break
        logger.warning("replicate %d attempt %d drew a single class; redrawing", replicate, attempt)
    else:
        raise ResampleError(
            f"replicate {replicate} drew a single class {MAX_RESAMPLE_RETRIES + 1} times"
        )
    logger.debug("replicate %d uses seed %d", replicate, seed)
    model = fit_logistic(resample, config)
    return seed, model.predict_proba(test_features)


def bootstrap_predict(
    train: TabularDataset,
    test: TabularDataset,
    n_replicates: int,
    master_seed: int,
    config: Optional[LogisticConfig] = None,
    workers: int = 1,
) -> PredictionMatrix:
    """Fit one logistic model per bootstrap resample and predict the test rows"""
    if n_replicates < 1:
        raise InputContractError("the number of bootstrap replicates must be at least 1")
    config = config or LogisticConfig()

    def run(b: int) -> Tuple[int, np.ndarray]:
        return _fit_replicate(train, test.features, b, master_seed, config)

    if workers > 1:
        results = Parallel(n_jobs=workers, prefer="threads")(
            delayed(run)(b) for b in range(n_replicates)
        )
    else:
        results = [run(b) for b in range(n_replicates)]

    seeds = [seed for seed, _ in results]
    values = np.vstack([row for _, row in results])
    logger.info("bootstrap matrix %d x %d (master seed %d)", *values.shape, master_seed)
    return PredictionMatrix(values=values, replicate_seeds=seeds)


def interval_bounds(
    matrix: PredictionMatrix, level: float, rule: str = "linear"
) -> Tuple[np.ndarray, np.ndarray]:
    """Per-instance (Q_{alpha/2}, Q_{1-alpha/2}) with alpha = 1 - level"""
    if not (0.0 <= level < 1.0):
        raise InputContractError(f"confidence level must be in [0, 1), got {level}")
    if rule not in QUANTILE_RULES:
        raise InputContractError(f"unknown quantile rule {rule!r}")
    if matrix.n_replicates < 2 and level > 0.0:
        logger.warning("only %d replicate: intervals are degenerate", matrix.n_replicates)

    alpha = 1.0 - level
    lower = np.quantile(matrix.values, alpha / 2.0, axis=0, method=rule)
    upper = np.quantile(matrix.values, 1.0 - alpha / 2.0, axis=0, method=rule)
    # guard against interpolation rounding at degenerate columns
    upper = np.maximum(upper, lower)
    return lower, upper


def percentile_intervals(
    matrix: PredictionMatrix,
    labels: Sequence[int],
    level: float,
    rule: str = "linear",
) -> ClassedIntervalDataset:
    """Percentile intervals at ``level`` split by the true test labels"""
    y = np.asarray(labels)
    if y.shape != (matrix.n_instances,):
        raise InputContractError(
            f"{y.shape[0] if y.ndim else 0} labels for {matrix.n_instances} matrix columns"
        )
    lower, upper = interval_bounds(matrix, level, rule)
    return ClassedIntervalDataset.from_labels(y, lower, upper)


def point_auc(scores: Iterable[float], labels: Iterable[int]) -> float:
    """Classical AUC of per-instance scores, typically the bootstrap means"""
    return classical_auc(scores, labels)


@dataclass(frozen=True, eq=False)
class BootstrapRun:
    """Everything the end-to-end lab produces"""
    train: TabularDataset
    test: TabularDataset
    matrix: PredictionMatrix
    split_seed: int
    master_seed: int

    @property
    def test_labels(self) -> np.ndarray:
        return self.test.labels

    def point_auc(self) -> float:
        return point_auc(self.matrix.mean_predictions(), self.test.labels)


def run_bootstrap_lab(
    data: TabularDataset,
    train_fraction: float,
    seed: int,
    n_replicates: int,
    config: Optional[LogisticConfig] = None,
    zero_as_missing: Sequence[str] = (),
    workers: int = 1,
) -> BootstrapRun:
    """Split, optionally impute, and build the prediction matrix"""
    train, test = stratified_split(data, train_fraction, seed)
    train, test = impute_zero_as_missing(train, test, list(zero_as_missing))
    matrix = bootstrap_predict(train, test, n_replicates, seed, config, workers)
    return BootstrapRun(train=train, test=test, matrix=matrix, split_seed=seed, master_seed=seed)


def interval_rows(lower: np.ndarray, upper: np.ndarray, labels: np.ndarray) -> List[dict]:
    """(label, lower, upper) rows in the interval-file layout"""
    return [
        {"label": int(y), "lower": float(lo), "upper": float(hi)}
        for y, lo, hi in zip(labels, lower, upper)
    ]
