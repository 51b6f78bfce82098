"""Exception types shared across the package."""


class MonoextError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(MonoextError):
    """Malformed or inconsistent input."""


class CycleError(ValidationError):
    """Cover relation contains a directed cycle."""


class DuplicateLabelError(ValidationError):
    """Repeated element label where distinct labels are required."""


class UnknownElement(ValidationError):
    """Label does not belong to the poset."""


class CapExceeded(MonoextError):
    """Enumeration would yield more results than the configured cap."""

    def __init__(self, cap: int):
        super().__init__(f"enumeration cap of {cap} exceeded")
        self.cap = cap


class InvalidPermutation(ValidationError):
    """Ordering of the query set violates the partial order."""


class EmptyQuery(ValidationError):
    """Query set must contain at least one element."""


class NotAChain(ValidationError):
    """Query elements are not pairwise comparable."""


class PreconditionViolated(ValidationError):
    """A fast-path precondition fails; carries the offending pair."""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class NotIncreasing(ValidationError):
    """Values that must be strictly increasing are not."""


class NotIncomparable(ValidationError):
    """Operation requires two incomparable elements."""


class NotAdjacentValues(ValidationError):
    """Operation requires two consecutive scale values."""


class OutOfDomain(ValidationError):
    """Argument outside the unit interval or unit square."""


class ToleranceNotMet(MonoextError):
    """Adaptive quadrature hit its refinement limit."""


class MembershipViolation(MonoextError):
    """A constructed function fails its class constraints; carries witnesses."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidGrid(ValidationError):
    """Grid parameters out of range."""
