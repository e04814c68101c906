"""Exception types shared across the package."""


class InputError(ValueError):
    """Caller-supplied data is invalid: bad parameters, malformed input, violated precondition."""


class GraphParseError(InputError):
    """A graph or cycle file could not be parsed.  Carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class ResourceLimitError(RuntimeError):
    """An exhaustive search would exceed its configured budget."""


class InvariantViolation(RuntimeError):
    """An internal consistency guarantee failed.  Indicates a bug, not bad input."""
