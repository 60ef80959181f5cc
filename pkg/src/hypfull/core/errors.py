"""Exception hierarchy shared by the library and the CLI. Exit codes are carried by the classes."""


class HypfullError(Exception):
    """Base class of all hypfull errors."""

    exit_code: int = 3


class InputError(HypfullError):
    """Invalid input: malformed files, out-of-domain arguments, invalid graphs."""

    exit_code = 1


class ConvergenceError(HypfullError):
    """A numerical procedure did not reach its tolerance."""

    exit_code = 2


class InternalAssertionError(HypfullError):
    """An internal consistency check failed."""

    exit_code = 3


class PlanarCodeError(InputError):
    """Truncated or malformed planar_code stream."""


class SpiralFormatError(InputError):
    """Malformed spiral code or spiral text line."""


class DomainError(InputError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class GraphValidationError(InputError):
    """Graph is not a fullerene where a fullerene is required."""


class MissingColumnError(InputError):
    """Descriptor table lacks a required column."""


class RankDeficiencyError(InputError):
    """Regression design matrix is not of full column rank."""

    def __init__(self, message: str, dependent_columns: list[str] | None = None) -> None:
        super().__init__(message)
        self.dependent_columns = dependent_columns or []


class RealizationError(ConvergenceError):
    """Andreev realization failed to converge or produced an invalid polyhedron."""

    def __init__(self, message: str, best_residual: float = float("inf"), attempts: int = 0) -> None:
        super().__init__(message)
        self.best_residual = best_residual
        self.attempts = attempts


class BudgetExceededError(ConvergenceError):
    """Exhaustive search exceeded its node budget."""


class DecompositionError(InternalAssertionError):
    """Tetrahedral decomposition is inconsistent (apex outside, mixed orientation)."""


class CacheCorruptionError(InternalAssertionError):
    """Cache entry failed its checksum or format check."""
