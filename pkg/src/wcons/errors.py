"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Malformed numeric input (wrong shape, non-finite entries, bad scalar)."""


class DimensionMismatch(InvalidInput):
    """Operands live in different dimensions."""


class NotPositiveDefinite(ValueError):
    """Certification of a symmetric matrix as positive definite failed.

    Carries the offending smallest eigenvalue in ``min_eigenvalue``.
    """

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class BadWeights(InvalidInput):
    """Weight vector is empty, non-positive, or does not sum to one."""


class GridMismatch(InvalidInput):
    """Quantile grids of different resolutions were combined."""


class MaxIterationsExceeded(RuntimeError):
    """An iterative solver ran out of iterations.

    Carries the last iterate and the residual reached so callers can inspect
    how far the solve got.
    """

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class DegenerateTrim(ValueError):
    """Trimming level leaves no mass to keep."""


class UnsupportedConfiguration(ValueError):
    """Inputs outside the supported envelope of an exhaustive routine."""


class SingularSubset(RuntimeError):
    """Covariance estimation kept hitting singular subsets."""


class ParseError(ValueError):
    """A document on disk could not be parsed; carries location context."""
