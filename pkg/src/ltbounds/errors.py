"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """An argument is valid mathematically but outside the supported range."""


class FamilyValidationError(ValueError):
    """A trigonometric family failed its orthonormality or mean-zero check."""
