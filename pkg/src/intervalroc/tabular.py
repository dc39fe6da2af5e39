"""
Tabular data ingestion and stratified splitting for the bootstrap lab
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InputContractError
from .models import ClassedIntervalDataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TabularDataset:
    """Feature matrix, binary labels and feature names"""
    features: np.ndarray
    labels: np.ndarray
    feature_names: Tuple[str, ...]

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=float)
        labels = np.asarray(self.labels).astype(int)
        if features.ndim != 2:
            raise InputContractError("features must be a 2-D matrix")
        if labels.shape != (features.shape[0],):
            raise InputContractError("labels do not align with feature rows")
        if features.shape[1] != len(self.feature_names):
            raise InputContractError("feature_names do not match feature columns")
        if np.isnan(features).any():
            raise InputContractError("features contain missing values")
        if not np.all(np.isin(labels, (0, 1))):
            raise InputContractError("labels must be binary 0/1")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_rows(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    def class_counts(self) -> Dict[int, int]:
        return {c: int(np.count_nonzero(self.labels == c)) for c in (0, 1)}

    def has_both_classes(self) -> bool:
        counts = self.class_counts()
        return counts[0] > 0 and counts[1] > 0

    def subset(self, indices: Sequence[int]) -> "TabularDataset":
        idx = np.asarray(indices, dtype=int)
        return TabularDataset(self.features[idx], self.labels[idx], self.feature_names)


def load_csv(
    path: Union[str, Path],
    label_column: str = "Outcome",
    feature_columns: Optional[Sequence[str]] = None,
) -> TabularDataset:
    """Read a headed, comma-delimited UTF-8 CSV into a TabularDataset

    ``feature_columns`` defaults to every column except the label.  Any cell
    that is not a finite number is rejected with its line number.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")

    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or not any(name.strip() for name in header):
            raise InputContractError(f"{path} is empty or has no header row", line=1)
        header = [name.strip() for name in header]
        if len(set(header)) != len(header):
            raise InputContractError("duplicate column names in header", line=1)
        if label_column not in header:
            raise InputContractError(f"label column {label_column!r} not in header", line=1)

        if feature_columns is None:
            feature_columns = [name for name in header if name != label_column]
        missing = [name for name in feature_columns if name not in header]
        if missing:
            raise InputContractError(f"columns not in header: {', '.join(missing)}", line=1)
        if not feature_columns:
            raise InputContractError("no feature columns selected", line=1)

        feature_idx = [header.index(name) for name in feature_columns]
        label_idx = header.index(label_column)

        rows, labels = [], []
        for line_num, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise InputContractError(
                    f"expected {len(header)} fields, found {len(row)}", line=line_num
                )
            rows.append([_parse_number(row[i], header[i], line_num) for i in feature_idx])
            label = _parse_number(row[label_idx], label_column, line_num)
            if label not in (0.0, 1.0):
                raise InputContractError(
                    f"non-binary label {row[label_idx]!r} in column {label_column!r}",
                    line=line_num,
                )
            labels.append(int(label))

    if not rows:
        raise InputContractError(f"{path} has a header but no data rows")

    logger.info("loaded %d rows x %d features from %s", len(rows), len(feature_idx), path)
    return TabularDataset(np.asarray(rows, dtype=float), np.asarray(labels), tuple(feature_columns))


def _parse_number(cell: str, column: str, line_num: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise InputContractError(
            f"unparseable number {cell!r} in column {column!r}", line=line_num
        ) from None
    if not math.isfinite(value):
        raise InputContractError(f"non-finite value in column {column!r}", line=line_num)
    return value


def stratified_split(
    data: TabularDataset, train_fraction: float, seed: int
) -> Tuple[TabularDataset, TabularDataset]:
    """Per-class proportional train/test split

    Each class contributes floor(n_c * fraction) training rows; rows needed to
    reach round(n * fraction) go to the larger class.  Each class keeps at
    least one row on either side.
    """
    train_idx, test_idx = stratified_indices(data.labels, train_fraction, seed)
    return data.subset(train_idx), data.subset(test_idx)


def stratified_indices(
    labels: np.ndarray, train_fraction: float, seed: int
) -> Tuple[np.ndarray, np.ndarray]:
    if not (0.0 < train_fraction < 1.0):
        raise InputContractError(f"train fraction must be in (0, 1), got {train_fraction}")
    labels = np.asarray(labels)
    members = {c: np.flatnonzero(labels == c) for c in (0, 1)}
    for c, idx in members.items():
        if idx.size < 2:
            raise InputContractError(f"class {c} has {idx.size} rows; stratification needs 2")

    n = labels.shape[0]
    quota = {c: math.floor(idx.size * train_fraction) for c, idx in members.items()}
    target = math.floor(n * train_fraction + 0.5)
    larger = 0 if members[0].size >= members[1].size else 1
    quota[larger] += max(0, target - sum(quota.values()))
    for c, idx in members.items():
        quota[c] = min(max(quota[c], 1), idx.size - 1)

    rng = np.random.default_rng(seed)
    train, test = [], []
    for c in (0, 1):
        shuffled = rng.permutation(members[c])
        train.append(shuffled[: quota[c]])
        test.append(shuffled[quota[c]:])
    train_idx = np.sort(np.concatenate(train))
    test_idx = np.sort(np.concatenate(test))
    logger.info("stratified split: %d train / %d test (seed %d)", train_idx.size, test_idx.size, seed)
    return train_idx, test_idx


def impute_zero_as_missing(
    train: TabularDataset, test: TabularDataset, columns: Sequence[str]
) -> Tuple[TabularDataset, TabularDataset]:
    """Replace zeros in ``columns`` by the training median of the non-zero values"""
    if not columns:
        return train, test
    unknown = [name for name in columns if name not in train.feature_names]
    if unknown:
        raise InputContractError(f"zero-as-missing columns not found: {', '.join(unknown)}")

    train_x = train.features.copy()
    test_x = test.features.copy()
    for name in columns:
        j = train.feature_names.index(name)
        observed = train_x[train_x[:, j] != 0.0, j]
        if observed.size == 0:
            raise InputContractError(f"column {name!r} is zero on every training row")
        median = float(np.median(observed))
        train_x[train_x[:, j] == 0.0, j] = median
        test_x[test_x[:, j] == 0.0, j] = median
        logger.debug("imputed zeros in %s with training median %.4f", name, median)
    return (
        TabularDataset(train_x, train.labels, train.feature_names),
        TabularDataset(test_x, test.labels, test.feature_names),
    )


INTERVAL_COLUMNS = ("label", "lower", "upper")


def load_interval_csv(path: Union[str, Path]) -> ClassedIntervalDataset:
    """Read a label,lower,upper interval file from any interval producer

    Rows are validated one by one so errors name their line; a file holding a
    single class is rejected.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")

    labels, lowers, uppers = [], [], []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise InputContractError(f"{path} is empty", line=1)
        header = [name.strip() for name in reader.fieldnames]
        missing = [name for name in INTERVAL_COLUMNS if name not in header]
        if missing:
            raise InputContractError(f"missing columns: {', '.join(missing)}", line=1)
        reader.fieldnames = header

        for row in reader:
            line_num = reader.line_num
            if None in row:
                raise InputContractError(
                    f"expected {len(header)} fields, found {len(header) + len(row[None])}",
                    line=line_num,
                )
            if all(not (value or "").strip() for value in row.values()):
                continue
            label = _parse_number(row["label"] or "", "label", line_num)
            if label not in (0.0, 1.0):
                raise InputContractError(f"non-binary label {row['label']!r}", line=line_num)
            lower = _parse_number(row["lower"] or "", "lower", line_num)
            upper = _parse_number(row["upper"] or "", "upper", line_num)
            if lower > upper:
                raise InputContractError(f"lower {lower} exceeds upper {upper}", line=line_num)
            labels.append(int(label))
            lowers.append(lower)
            uppers.append(upper)

    data = ClassedIntervalDataset.from_labels(labels, lowers, uppers)
    data.require_both_classes()
    logger.info("loaded %d positive and %d negative intervals from %s", data.n_pos, data.n_neg, path)
    return data


def load_labels_csv(path: Union[str, Path], column: str = "label") -> np.ndarray:
    """Read one binary label per row from a headed CSV"""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Labels file not found: {path}")
    labels = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or column not in [n.strip() for n in reader.fieldnames]:
            raise InputContractError(f"labels file needs a {column!r} column", line=1)
        reader.fieldnames = [n.strip() for n in reader.fieldnames]
        for line_num, row in enumerate(reader, start=2):
            value = _parse_number(row[column] or "", column, line_num)
            if value not in (0.0, 1.0):
                raise InputContractError(f"non-binary label {row[column]!r}", line=line_num)
            labels.append(int(value))
    return np.asarray(labels, dtype=int)
