"""Exception hierarchy shared by the library and the CLI."""


class RBXError(Exception):
    """Base class for all library errors."""


class DomainError(RBXError, ValueError):
    """An argument lies outside the domain of an operation."""


class OperatorUndefined(DomainError):
    """A base operator was applied where it has no value (e.g. integrating 1/x)."""


class ParseError(DomainError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class GuardError(RBXError):
    """A word-length or rewrite-step guard was exceeded."""

    def __init__(self, message: str, trace: list[str] | None = None):
        super().__init__(message)
        self.trace = list(trace or [])


class InternalError(RBXError, AssertionError):
    """An invariant that the constructions guarantee was found broken."""
