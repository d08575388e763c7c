"""Exception and warning types shared across the package."""


class SubdiffError(Exception):
    """Base class for all package errors."""


class EllipticityError(SubdiffError, ValueError):
    """Diffusion coefficient drops below the declared ellipticity floor."""


class CompatibilityError(SubdiffError, ValueError):
    """Boundary data does not vanish at t = 0."""


class ConvergenceError(SubdiffError, ArithmeticError):
    """No evaluation route reached the requested tolerance."""


class NormDivergenceError(SubdiffError, ArithmeticError):
    """A weighted norm integral is dominated by its singular cell."""


class ConditioningError(SubdiffError, ArithmeticError):
    """A Gram matrix is too ill-conditioned for a trustworthy solve."""


class GridMismatchError(SubdiffError, ValueError):
    """Operands live on different grids."""


class BasisSizeError(SubdiffError, ValueError):
    """Requested spectral basis exceeds the resolvable fraction of the grid."""


class TruncationWarning(UserWarning):
    """Retained modes do not carry essentially all of the data's energy."""
