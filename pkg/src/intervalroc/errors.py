"""
Exception hierarchy for intervalroc

The CLI maps these onto exit codes: input-contract problems exit with 2,
numeric failures exit with 3.
"""

from typing import Optional


class IntervalRocError(Exception):
    """Base class for every error raised by intervalroc"""


class InputContractError(IntervalRocError, ValueError):
    """Malformed interval, row, label or configuration value"""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyClassError(InputContractError):
    """A metric needs both positives and negatives but one class is empty"""


class ConvergenceError(IntervalRocError, ArithmeticError):
    """Logistic regression did not reach the gradient tolerance"""

    def __init__(self, message: str, gradient_norm: float, iterations: int) -> None:
        self.gradient_norm = gradient_norm
        self.iterations = iterations
        super().__init__(
            f"{message} (gradient norm {gradient_norm:.3e} after {iterations} iterations)"
        )


class ResampleError(IntervalRocError, RuntimeError):
    """Bootstrap resampling kept drawing a single class"""


class SweepLevelError(IntervalRocError):
    """One confidence level of a sweep failed to load or evaluate"""

    def __init__(self, level: float, cause: Exception) -> None:
        self.level = level
        self.cause = cause
        super().__init__(f"confidence level {level:g} failed: {cause}")
