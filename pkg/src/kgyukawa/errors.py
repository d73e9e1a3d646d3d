"""Exception hierarchy shared by every solver layer."""


class KGYukawaError(Exception):
    """Base class for all package errors."""


class DomainError(KGYukawaError, ValueError):
    """An input lies outside the domain of an operation."""


class ComplexBranchError(KGYukawaError):
    """A square-root argument of the NU cascade is negative."""

    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"{name} = {value!r} < 0: no real branch")


class NoRealStateError(KGYukawaError):
    """The energy formula admits no real level (negative discriminant)."""


class ConvergenceError(KGYukawaError):
    """Bisection failed to converge; ``bracket`` holds the best interval."""

    def __init__(self, message, bracket=None):
        self.bracket = bracket
        super().__init__(message)


class NotFoundError(KGYukawaError):
    """No bound state with the requested node count exists in the window."""


class NonNormalizableError(KGYukawaError):
    """The wavefunction does not decay, so it cannot be normalized."""


class DegenerateInputError(KGYukawaError, ValueError):
    """The input carries no information (zero scale, zero template)."""


class InternalError(KGYukawaError):
    """A self-consistency check failed; indicates an implementation bug."""


class AccuracyWarning(UserWarning):
    """A numerical result did not meet its self-convergence target."""


class UsageError(KGYukawaError, ValueError):
    """Invalid command-line or harness request."""
