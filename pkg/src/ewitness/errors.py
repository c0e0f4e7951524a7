"""Exception types raised across the package."""


class WitnessError(ValueError):
    """Base class for all package errors."""


class NotHermitian(WitnessError):
    pass


class DimMismatch(WitnessError):
    pass


class MissingDims(WitnessError):
    pass


class BadDimension(WitnessError):
    pass


class OutOfRange(WitnessError):
    pass


class ConstraintViolation(WitnessError):
    pass


class NotDensityMatrix(WitnessError):
    pass


class NoWitnessExists(WitnessError):
    """c_max does not exceed the minimum eigenvalue, so no c makes rho - c*I a witness."""


class InvalidC(WitnessError):
    pass


class CountMismatch(WitnessError):
    pass


class BadBasis(WitnessError):
    pass


class StateFileError(WitnessError):
    """Malformed or invalid state file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
