"""Exception hierarchy shared by all modules."""


class UnruhOttoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(UnruhOttoError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleProximity(DomainError):
    """An argument sits within the pole guard of a singularity."""


class DimensionMismatch(UnruhOttoError, ValueError):
    pass


class NonConvergence(UnruhOttoError, ArithmeticError):
    """A series or quadrature failed to reach its error target.

    ``estimate`` and ``error`` carry the best value found so far (or None).
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ConstraintUnsatisfiable(UnruhOttoError):
    """The closed-cycle condition has no admissible solution."""
