"""
intervalroc - ROC analysis for interval-valued risk predictions

Evaluates classifiers that output an interval [L, U] per input instead of a
single score: strict and permissive ROC curves, the correct / overlap /
incorrect decomposition of positive-negative pairs, uAUC, the abstention
rate and range bounds on the Bayes-optimal AUC.  Includes a bootstrap lab
that builds percentile intervals from logistic-regression replicates and a
synthetic world with a known posterior for checking the bounds.
"""

__version__ = "0.2.0"
__package__ = "intervalroc"

from .models import (
    ClassedIntervalDataset, IntervalPrediction, PairOrdering, ThresholdPosition,
    compare_pair, compare_threshold, make_interval,
)
from .curves import (
    IntegrationRule, Pairing, RateQuadruple, RocCurve,
    build_curve, integrate_curve, rates_at, threshold_grid,
)
from .metrics import (
    BoundInterval, ConfidenceSweep, EvaluationReport, ThreeRegion,
    abstention_rate, auc_l, auc_u, classical_auc, confidence_sweep,
    curve_diagnostics, evaluate, optimal_auc_bounds, pairwise_counts, uauc,
)
from .bootstrap import (
    PredictionMatrix, bootstrap_predict, percentile_intervals, run_bootstrap_lab,
)
from .synthetic import SyntheticConfig, generate_world, build_intervals, validate_bounds
from .errors import (
    ConvergenceError, EmptyClassError, InputContractError, IntervalRocError,
    ResampleError, SweepLevelError,
)

__all__ = [
    'IntervalPrediction',
    'ClassedIntervalDataset',
    'PairOrdering',
    'ThresholdPosition',
    'make_interval',
    'compare_pair',
    'compare_threshold',
    'IntegrationRule',
    'Pairing',
    'RateQuadruple',
    'RocCurve',
    'threshold_grid',
    'rates_at',
    'build_curve',
    'integrate_curve',
    'ThreeRegion',
    'BoundInterval',
    'EvaluationReport',
    'ConfidenceSweep',
    'pairwise_counts',
    'auc_l',
    'auc_u',
    'uauc',
    'abstention_rate',
    'optimal_auc_bounds',
    'evaluate',
    'curve_diagnostics',
    'classical_auc',
    'confidence_sweep',
    'PredictionMatrix',
    'bootstrap_predict',
    'percentile_intervals',
    'run_bootstrap_lab',
    'SyntheticConfig',
    'generate_world',
    'build_intervals',
    'validate_bounds',
    'IntervalRocError',
    'InputContractError',
    'EmptyClassError',
    'ConvergenceError',
    'ResampleError',
    'SweepLevelError',
]
