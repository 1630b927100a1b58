"""Exception types shared across the package."""


class QCumulantError(Exception):
    """Base class for all errors raised by qcumulant."""


class DomainError(QCumulantError, ValueError):
    """An input lies outside the domain of an operation."""


class ResourceError(QCumulantError, RuntimeError):
    """A size guard was exceeded."""

    def __init__(self, message: str, limit: int | None = None):
        super().__init__(message)
        self.limit = limit


class ParseError(QCumulantError, ValueError):
    """Malformed textual input. ``column`` is 0-based when known."""

    def __init__(self, message: str, column: int | None = None):
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)
        self.column = column


class InvalidFixtureError(DomainError):
    """A test fixture violates its own precondition."""
