"""Exception types shared across the package.

The CLI maps these onto exit codes: precondition/usage problems exit 2,
violated numerical invariants exit 1, exhausted work budgets exit 3.
"""


class WeylabError(Exception):
    """Base class for all package-specific errors."""


class WorkBudgetError(WeylabError):
    """A computation would exceed the configured work budget."""


class ResolutionError(WeylabError):
    """A sampling grid is too coarse for the requested computation."""


class AliasingError(WeylabError):
    """Alias-free evaluation was requested on an undersampling grid."""


class InvariantViolation(WeylabError):
    """A numerical invariant that should hold was measurably violated."""
