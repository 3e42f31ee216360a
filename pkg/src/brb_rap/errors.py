"""Exception hierarchy shared by every module of the package."""


class RapError(Exception):
    """Base class for all errors raised by brb_rap."""


class StructuralError(RapError, ValueError):
    """A configuration or solution does not fit the shape of its instance."""


class InstanceError(RapError, ValueError):
    """An instance, subsystem or component violates its invariants."""


class SolutionParseError(RapError, ValueError):
    """A solution string could not be decoded.

    ``position`` is the zero-based group index the problem was found in,
    or ``None`` when the error concerns the string as a whole.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class CodecError(RapError, ValueError):
    """A solution cannot be rendered as a digit string (some count > 9)."""


class InfeasibleInstanceError(RapError):
    """Some subsystem has no admissible configuration left."""

    def __init__(self, message: str, subsystem: int):
        super().__init__(message)
        self.subsystem = subsystem


class ResourceLimitError(RapError):
    """An intermediate candidate set grew beyond the configured item cap."""

    def __init__(self, message: str, stage: int, size: int, cap: int):
        super().__init__(message)
        self.stage = stage
        self.size = size
        self.cap = cap


class OracleRefusal(RapError):
    """The brute-force oracle declined an instance whose space is too large."""

    def __init__(self, size: int, limit: int):
        super().__init__(
            f"number-based search space has {size} points, above the oracle limit {limit}"
        )
        self.size = size
        self.limit = limit
