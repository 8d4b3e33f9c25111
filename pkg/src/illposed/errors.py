"""Exception hierarchy shared by all modules."""


class IllposedError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(IllposedError):
    """An argument violates a documented precondition."""


class CompositionError(InvalidInputError):
    """Two finite maps have incompatible shapes for composition."""


class NumericalFailureError(IllposedError):
    """A numerical routine failed to converge or hit a singular system."""


class NoSolutionError(IllposedError):
    """A requested target (e.g. a discrepancy residual) is unattainable."""


class ParseError(InvalidInputError):
    """An input file is malformed; the message carries the line number."""
