"""Exception hierarchy for hypernorm.

Input problems and violated theorem hypotheses are both ``ValueError`` subclasses so
library callers can catch them broadly; the CLI maps them to distinct exit codes.
"""


class HypernormError(Exception):
    """Base class for all hypernorm errors."""


class InputError(HypernormError, ValueError):
    """Malformed or inconsistent input (CLI exit code 2)."""


class IncompatibleShapeError(InputError):
    """Vector lengths do not match the tensor dimensions."""


class InvalidPairError(InputError):
    """An index pair (j, k) is not usable, e.g. j == k."""


class IndexOutOfRangeError(InputError):
    """A 1-based position index lies outside 1..r."""


class SizeCapError(InputError):
    """A dense tensor or oracle grid would exceed its configured cap."""

    def __init__(self, message: str, estimate: int, cap: int):
        super().__init__(f"{message}: estimated {estimate} exceeds cap {cap}")
        self.estimate = estimate
        self.cap = cap


class EdgeListError(InputError):
    """Invalid hypergraph edge-list text; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class HypothesisError(HypernormError, ValueError):
    """A hypothesis of the requested theorem or bound does not hold (CLI exit code 3)."""


class DegenerateGradientError(HypernormError, ArithmeticError):
    """The gradient handed to a Hoelder dual step is identically zero."""
