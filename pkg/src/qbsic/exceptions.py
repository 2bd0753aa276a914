"""Exception hierarchy.

Every error is a ``ValueError`` subclass so callers that only care about
"bad input" can catch one thing.
"""


class QbsicError(ValueError):
    """Base class for all package errors."""


class ShapeError(QbsicError):
    """Array dimensions do not match what an operation needs."""


class SizeError(QbsicError):
    """A result would exceed the configured size cap."""


class DomainError(QbsicError):
    """An argument lies outside the operation's domain (e.g. d < 2)."""


class InvalidInputError(QbsicError):
    """An operator or vector violates its type invariants."""


class InvalidityError(QbsicError):
    """A probability vector does not correspond to a valid quantum state."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ParameterError(QbsicError):
    """Inconsistent generalized-rule parameters."""


class ConditioningError(QbsicError):
    """Bayesian conditioning on an outcome of zero predicted probability."""


class IdentityViolation(QbsicError):
    """A numerical identity that must hold exactly was violated."""


class SchemaError(QbsicError):
    """A JSON document does not conform to its schema."""
