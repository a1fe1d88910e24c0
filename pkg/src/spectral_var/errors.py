"""Error kinds raised by the spectral-variation toolkit."""


class SpectralVarError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(SpectralVarError, ValueError):
    """Matrix shapes do not fit the requested operation."""


class StructureError(SpectralVarError, ValueError):
    """A matrix lacks a required structure (e.g. it is not Hermitian)."""


class ShapeError(SpectralVarError, ValueError):
    """A matrix is not (strictly) upper-triangular where that is required."""


class ParameterError(SpectralVarError, ValueError):
    """A scalar parameter or index selection is out of range."""


class NumericalError(SpectralVarError, ArithmeticError):
    """An eigen- or singular-value solver did not converge."""


class DegenerateTermError(SpectralVarError, ValueError):
    """A summand of a spectral functional diverges at the given eigenvalue."""

    def __init__(self, message: str, eigenvalue: complex):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class DegenerateError(SpectralVarError, ValueError):
    """A ratio is undefined because its denominator vanishes."""


class MatrixFileError(SpectralVarError, ValueError):
    """A matrix file is missing, malformed, or in an unsupported format."""
