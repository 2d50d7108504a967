"""Exception types shared across the package."""


class GraystateError(ValueError):
    """Base class for all errors raised by graystate."""


class InvalidSpecError(GraystateError):
    pass


class EmptySectorError(GraystateError):
    """Raised when a generator is asked for a sector with no ditstrings."""


class DimensionCapError(GraystateError):
    """Raised when a sector or Hilbert space exceeds the configured size cap."""


class SearchFailure(GraystateError):
    """Raised when the Hamiltonian-path search cannot complete a Gray code."""


class InvalidGrayCodeError(GraystateError):
    pass


class NormalizationError(GraystateError):
    pass


class LevelBoundError(GraystateError):
    """Raised when a gate references a qudit index or level outside its range."""


class SingularRootsError(GraystateError):
    """Raised when Bethe roots hit a pole of the momentum map or of the S-matrix."""
