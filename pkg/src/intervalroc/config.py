"""
Run configuration for the intervalroc pipeline and CLI
"""

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple

from .errors import InputContractError

COMMANDS = ("eval", "sweep", "bootstrap", "synth-bounds")
EMIT_KINDS = ("json", "csv", "svg")

# numpy.quantile methods accepted by --quantile-rule; "linear" is type 7
QUANTILE_RULES = (
    "linear",
    "lower",
    "higher",
    "midpoint",
    "nearest",
    "median_unbiased",
    "normal_unbiased",
)

DEFAULT_LEVELS = (0.50, 0.70, 0.90, 0.95)
DEFAULT_ALPHAS = tuple(round(0.01 * k, 2) for k in range(1, 11))


@dataclass(frozen=True)
class LogisticConfig:
    """Solver settings for the L2-regularised logistic regression

    ``l2`` of None means 1 / n_train, resolved at fit time.
    """
    l2: Optional[float] = None
    max_iter: int = 100
    tol: float = 1e-8

    def __post_init__(self) -> None:
        if self.l2 is not None and self.l2 < 0:
            raise InputContractError(f"l2 strength must be >= 0, got {self.l2}")
        if self.max_iter < 1:
            raise InputContractError("max_iter must be at least 1")
        if not self.tol > 0:
            raise InputContractError("tol must be positive")

    def resolve_l2(self, n_train: int) -> float:
        return self.l2 if self.l2 is not None else 1.0 / n_train


@dataclass(frozen=True)
class RunConfig:
    """Every CLI setting resolved to a concrete value; echoed in manifest.json"""
    command: str
    out_dir: str
    input: Optional[str] = None
    labels: Optional[str] = None
    label_column: str = "Outcome"
    zero_as_missing: Tuple[str, ...] = ()
    levels: Tuple[float, ...] = DEFAULT_LEVELS
    seed: int = 0
    bootstrap_b: int = 300
    train_frac: float = 0.30
    alpha_pos: Optional[float] = None
    alpha_neg: Optional[float] = None
    alphas: Tuple[float, ...] = DEFAULT_ALPHAS
    n_per_class: int = 20_000
    mu0: float = 0.0
    mu1: float = 1.0
    emit: Tuple[str, ...] = EMIT_KINDS
    quantile_rule: str = "linear"
    logistic: LogisticConfig = field(default_factory=LogisticConfig)
    integration: str = "trapezoid"
    workers: int = 1

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise InputContractError(f"unknown command {self.command!r}")
        unknown = [kind for kind in self.emit if kind not in EMIT_KINDS]
        if unknown:
            raise InputContractError(f"unknown --emit kinds: {', '.join(unknown)}")
        if self.quantile_rule not in QUANTILE_RULES:
            raise InputContractError(f"unknown quantile rule {self.quantile_rule!r}")
        if self.integration not in ("trapezoid", "step"):
            raise InputContractError(f"unknown integration rule {self.integration!r}")
        if self.workers < 1:
            raise InputContractError("workers must be at least 1")
        for level in self.levels:
            if not 0.0 <= level < 1.0:
                raise InputContractError(f"confidence level {level:g} outside [0, 1)")

    def emits(self, kind: str) -> bool:
        return kind in self.emit

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key, value in data.items():
            if isinstance(value, tuple):
                data[key] = list(value)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Inverse of to_dict; unknown keys are rejected"""
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise InputContractError(f"unknown manifest keys: {', '.join(sorted(extra))}")
        values: Dict[str, Any] = dict(data)
        values["logistic"] = LogisticConfig(**values.get("logistic", {}))
        for key in ("zero_as_missing", "levels", "alphas", "emit"):
            if key in values:
                values[key] = tuple(values[key])
        return cls(**values)


def parse_percent_list(text: str) -> List[float]:
    """'50,70,90' -> [0.5, 0.7, 0.9]"""
    try:
        values = [float(part) / 100.0 for part in _split_list(text)]
    except ValueError as exc:
        raise InputContractError(f"levels must be numbers in percent: {text!r}") from exc
    return values


def parse_float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in _split_list(text)]
    except ValueError as exc:
        raise InputContractError(f"expected a comma-separated list of numbers: {text!r}") from exc


def _split_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]
