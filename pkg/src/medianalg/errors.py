"""Exception taxonomy shared by the library and the CLI exit-code contract."""


class MedianAlgError(Exception):
    """Base class for all library errors."""


class MalformedInputError(MedianAlgError):
    """A file or table is structurally invalid (CLI exit code 2)."""


class PreconditionError(MedianAlgError):
    """An operation was called with inputs violating its contract (exit code 2)."""


class UsageError(MedianAlgError):
    """Objects from different algebras were mixed, or a flag combination is invalid (exit code 2)."""


class ThresholdError(MedianAlgError):
    """A size guard refused the computation (exit code 3)."""


class StructureError(MedianAlgError):
    """An identity that must hold on every verified median algebra failed (exit code 1).

    Raised by self-testing operations (triple intersection, wall separation,
    Helly intersection) when the underlying table is not actually a median
    algebra.
    """
