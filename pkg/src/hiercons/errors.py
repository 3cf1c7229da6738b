"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class EdgeListParseError(ValueError):
    """A line of an edge-list file could not be parsed.

    Attributes
    ----------
    line_number : int or None
        1-based line number of the offending line, when known.
    """

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ConvergenceError(RuntimeError):
    """An iterative procedure hit its iteration cap.

    The best result obtained so far is attached so callers can inspect or
    salvage it.

    Attributes
    ----------
    best : object
        Last/best estimate produced before the cap was reached.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
