"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class RangeError(IndexError):
    """An index argument is out of its admissible range."""


class OrderError(ValueError):
    """A majorization precondition does not hold."""


class ParseError(ValueError):
    """Malformed textual or JSON input."""
