"""Exception types shared across the package."""


class ForestSimError(Exception):
    """Base class for all forestsim errors."""


class GraphParseError(ForestSimError):
    """Raised when an edge-list or label stream cannot be parsed.

    ``line_number`` is 1-based and refers to the offending input line, or
    ``None`` when the problem is not tied to a single line (e.g. empty input).
    """

    def __init__(self, message, line_number=None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GraphSizeError(ForestSimError):
    """Raised when a graph exceeds the size limit of a dense or oracle path."""


class ConvergenceError(ForestSimError):
    """Raised when the iterative solver fails to reach its residual target.

    ``worst_residual`` holds the largest relative residual over the
    right-hand sides still unconverged when the iteration cap was hit.
    """

    def __init__(self, message, worst_residual=None, iterations=None):
        self.worst_residual = worst_residual
        self.iterations = iterations
        super().__init__(message)


class FingerprintMismatchError(ForestSimError):
    """Raised when a persisted index does not match the graph it is used with."""
