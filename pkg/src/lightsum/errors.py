"""Exception hierarchy shared by all lightsum modules."""


class LightsumError(Exception):
    """Base class for every error raised by this package."""


class ParseError(LightsumError):
    """Input text is not a finite decimal number or a well-formed instance file."""


class InvalidValue(LightsumError):
    """A numeric argument violates its documented domain."""


class Overflow(LightsumError):
    """A normalized value exceeds the configured big-integer ceiling."""


class StageMismatch(LightsumError):
    """An arrival profile was propagated through a different number of stages
    than the instance it is being checked against."""


class ResourceLimit(LightsumError):
    """An exact computation would exceed its configured memory or size budget.

    The result is never silently approximated; callers should pick a
    different solver or raise the budget.
    """


class InvalidPerturbation(LightsumError):
    """A sampled cable-length error would make some physical length non-positive."""
