"""Exception taxonomy shared across the package.

Every error raised by library code derives from :class:`EtkitError`, so
callers (and the CLI) can distinguish "your input is bad" from genuine bugs.
"""

from __future__ import annotations


class EtkitError(Exception):
    """Base class for all library errors."""


class ValidationError(EtkitError):
    """Input violates a documented precondition or structural invariant."""


class ParseError(EtkitError):
    """Expression text does not conform to the grammar.

    Carries the offset of the offending token in ``position``.
    """

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NotAUnit(ValidationError):
    """Value is not a 1-unit for the given prime."""


class DenominatorNotInvertible(ValidationError):
    """Denominator divisible by p cannot be inverted p-adically."""


class PrecisionExhausted(EtkitError):
    """The requested invariant is ambiguous at the working precision."""


class DegreeTooSmall(ValidationError):
    """Cohomology was requested below the minimal usable degree (2)."""


class WrongPrime(ValidationError):
    """Reserved: the logarithmic-level contract answers 1 for odd p
    instead of raising, so this is never raised by library code."""


class DimensionTooLarge(EtkitError):
    """An exhaustive search was requested above its configured bound."""


class NotAnExtension(ValidationError):
    """The rigidity criterion needs an Ext-rooted normalized expression."""


class InvalidModel(ValidationError):
    """Field-model parameters are inconsistent with the ambient prime."""


class ModelUnsupported(EtkitError):
    """The requested construction is not available for this field model."""


class NotAHomomorphism(ValidationError):
    """A supposed group homomorphism fails the defining identity."""


class OrderBound(ValidationError):
    """Finite group exceeds the configured order bound."""


class KernelNotCentral(ValidationError):
    """Extension-class input whose kernel is not central of order p."""
