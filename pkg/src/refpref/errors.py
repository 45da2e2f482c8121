"""Exception types shared across the library."""


class RefPrefError(Exception):
    """Base class for all library errors."""


class BadShape(RefPrefError):
    """An input array has the wrong shape, size, or non-finite entries."""


class SingularSystem(RefPrefError):
    """The log-coordinate system matrix is singular: bundles do not decompose uniquely."""


class SpecMismatch(RefPrefError):
    """Two group elements (or an element and a group) belong to different groups."""


class NonPositiveBundle(RefPrefError):
    """A bundle touches or leaves the strictly positive orthant where values are defined."""


class NonPositivePrice(RefPrefError):
    """A price vector has a zero, negative, or non-finite coordinate."""


class NegativeCoordinate(RefPrefError):
    """A compared bundle has a negative coordinate."""


class BothBoundary(RefPrefError):
    """Both compared bundles sit on the orthant boundary; no ordering rule applies."""


class NotCoercive(RefPrefError):
    """The group's exponential sum has no minimizer, so no demand function exists."""


class ZeroWealth(RefPrefError):
    """An agent's budget (or endowment value at current prices) is not positive."""


class BoxTooLarge(RefPrefError):
    """A requested grid search would exceed the point-count limit."""


class ScenarioError(RefPrefError):
    """A scenario file is missing, malformed, or semantically invalid."""
