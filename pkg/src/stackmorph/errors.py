"""Exception types shared across the package."""


class StackmorphError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(StackmorphError):
    """Operands live on different windows, grids, or image frames."""


class DomainError(StackmorphError):
    """A value (level, threshold, probability, ...) is outside its range."""


class KindError(StackmorphError):
    """Binary and grey values were mixed where a single kind is required."""


class CapacityError(StackmorphError):
    """An enumeration or table would exceed the configured size cap."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class StackingViolationError(StackmorphError):
    """Slices passed as a threshold stack are not decreasing in the level.

    ``level`` is the 1-based level t whose slice sticks out above the slice
    at t-1; ``position`` is the first offending pixel in row-major order.
    """

    def __init__(self, message: str, level: int, position: tuple[int, int]):
        super().__init__(message)
        self.level = level
        self.position = position


class CompositionError(StackmorphError):
    """Operators in a pipeline do not agree on kind or level range."""


class ParseError(StackmorphError):
    """A file could not be parsed; ``offset`` is the failing byte offset."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class DataError(StackmorphError):
    """Input data is inconsistent (mismatched pairs, bad pixel values)."""
