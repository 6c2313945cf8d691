"""Exception types shared across the package."""


class PtfError(Exception):
    """Base class for every error raised by ptfcount."""


class ZeroValue(PtfError):
    """A polynomial evaluated to exactly zero on a +-1 input.

    Threshold gates are assumed never to vanish on the cube, so this marks
    an invalid instance rather than something to be tie-broken.
    """


class DegreeExceeded(PtfError):
    pass


class TooManyVariables(PtfError):
    pass


class LimitExceeded(PtfError):
    """Exhaustive enumeration was asked for more variables than allowed."""


class InfeasibleConstraints(PtfError):
    """The answers recorded on a decision-tree path admit no weight vector.

    The true input always satisfies its own answers, so this indicates a bug.
    """


class ZeroLabelQuery(ZeroValue):
    """A tree's label query hit zero: the input polynomial vanishes at a cube point."""


class ParameterViolation(PtfError):
    pass


class InfeasibleBudget(PtfError):
    pass


class ParseError(PtfError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
