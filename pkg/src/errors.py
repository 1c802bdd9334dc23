"""
Exception types shared by the library modules.

Every class derives from ValueError and carries the exit code the CLI
reports when it escapes a run.
"""


class ShimuraError(ValueError):
    """Base class; also used for internal invariant failures."""
    exit_code = 5


class InvariantError(ShimuraError):
    exit_code = 5


class OrderDataError(InvariantError):
    """Table data failed a load-time consistency gate."""


class IdealError(InvariantError):
    """A one-sided ideal did not behave as a principal ideal should."""


class FactorizationError(ShimuraError):
    exit_code = 5


class DegenerateReductionError(ShimuraError):
    exit_code = 5


class PrecisionError(ShimuraError):
    """A denominator is not invertible at the requested p-adic precision."""
    exit_code = 5


class DefinitenessError(ShimuraError):
    exit_code = 5


class InadmissiblePrimeError(ShimuraError):
    exit_code = 2


class NotSplitError(InadmissiblePrimeError):
    """(a/p) != 1 for the fixed presentation."""


class NotSchottkyError(ShimuraError):
    """Pure (trace zero) generators are present, t > 0."""
    exit_code = 3


class UnsupportedFamilyError(ShimuraError):
    exit_code = 4


class NoXiError(UnsupportedFamilyError):
    """The family has class number one but no element with the right-unit property."""
