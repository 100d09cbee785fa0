"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class TimemapError(ValueError):
    """Base class for every error raised by this package."""


class ParseError(TimemapError):
    """An input row could not be turned into an event."""

    def __init__(self, row: int, message: str) -> None:
        super().__init__(f"row {row}: {message}")
        self.row = row


class MalformedTimestamp(ParseError):
    pass


class MissingField(ParseError):
    pass


class SampleTooLarge(TimemapError):
    pass


class InvalidN(TimemapError):
    pass


class InvalidSpec(TimemapError):
    pass


class EmptyRange(TimemapError):
    pass


class InvalidKernel(TimemapError):
    pass


class NonpositivePoint(TimemapError):
    pass


class EmptyGrid(TimemapError):
    pass


class DegenerateSeries(TimemapError):
    pass


class InvalidRule(TimemapError):
    pass


class LayoutOverflow(TimemapError):
    pass
