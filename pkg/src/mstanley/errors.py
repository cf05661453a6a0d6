"""Exception hierarchy shared by the library and the CLI."""


class MStanleyError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class RingMismatchError(MStanleyError, ValueError):
    pass


class NotPrimaryError(MStanleyError, ValueError):
    pass


class RedundantDecompositionError(MStanleyError, ValueError):
    pass


class UnsupportedError(MStanleyError, ValueError):
    pass


class InstanceSyntaxError(MStanleyError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceededError(MStanleyError, RuntimeError):
    exit_code = 2


class InvariantViolationError(MStanleyError, AssertionError):
    exit_code = 3
