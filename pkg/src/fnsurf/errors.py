"""Semantic exception hierarchy.

Public functions raise these instead of bare ValueError so callers can
distinguish domain violations from configuration mistakes and from
hypothesis failures of the estimates.
"""


class FnsurfError(Exception):
    """Base error for the package."""


class DomainError(FnsurfError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DegenerateInputError(DomainError):
    """Inputs coincide or collapse (repeated boundary points, empty family)."""


class EllipticTraceError(DomainError):
    """A trace with absolute value below 2: not a hyperbolic or parabolic isometry."""


class HypothesisViolationError(FnsurfError):
    """The geometric hypotheses of an estimate are not met (explicit, never silent)."""


class ConfigurationError(FnsurfError):
    """Malformed family, law or grid description."""


class TruncationRangeError(FnsurfError, IndexError):
    """Requested truncation depth outside the available range."""


class InternalGeometryError(FnsurfError):
    """Internal consistency failure (should be impossible on valid inputs)."""
