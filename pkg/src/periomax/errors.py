"""Exception hierarchy shared by every module of the package."""


class PeriomaxError(Exception):
    """Base class for all errors raised by periomax."""


class InvalidLengthError(PeriomaxError, ValueError):
    """Series too short for a Fourier grid with at least one interior frequency."""


class InvalidDataError(PeriomaxError, ValueError):
    """Input contains non-finite or non-numeric values."""


class DegenerateDataError(PeriomaxError, ValueError):
    """Input is valid but carries no information (e.g. all zeros)."""


class InvalidArgumentError(PeriomaxError, ValueError):
    """A parameter lies outside its admissible range."""


class ShapeError(PeriomaxError, ValueError):
    """Two objects that must share a grid or a length do not."""


class InsufficientProfileError(PeriomaxError, ValueError):
    """A dependence profile cannot answer a tail query beyond its support."""
