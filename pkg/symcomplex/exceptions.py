"""
Exception hierarchy for symcomplex.

EXIT CODES (used by the CLI error handler):
- 2: usage / invalid input
- 3: resource budget exceeded or partial result
- 4: precondition not met (e.g. M^2 not positive for the series path)

Invalid-input errors subclass ValueError so library callers can catch them
without importing this module.
"""


class SymbolicComplexityError(Exception):
    """Base class for all workbench errors."""

    exit_code: int = 1

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details


class InvalidInputError(SymbolicComplexityError, ValueError):
    """Bad alphabet, word, generator spec, parameter or name."""

    exit_code = 2


class UnsupportedAlphabetError(InvalidInputError):
    """Operation is defined for binary alphabets only."""


class EmptySubshiftError(InvalidInputError):
    """Forbidden words leave no bi-infinite point."""


class NonProlongableError(InvalidInputError):
    """Substitution image of the seed does not start with the seed."""


class InvariantViolationError(InvalidInputError):
    """A structural invariant (symmetry, normalization, stochasticity) fails."""


class ResourceBudgetError(SymbolicComplexityError):
    """Estimated enumeration cost exceeds the configured budget."""

    exit_code = 3


class PartialResultError(SymbolicComplexityError):
    """Prefix too short to finish the computation and no generator to extend it."""

    exit_code = 3

    def __init__(self, message: str, partial=None, **details):
        super().__init__(message, **details)
        self.partial = partial


class PreconditionError(SymbolicComplexityError):
    """A theorem hypothesis required by the chosen method does not hold."""

    exit_code = 4


class ReducibleChainError(PreconditionError):
    """Block chain has more than one recurrent class (stationary vector not unique)."""
