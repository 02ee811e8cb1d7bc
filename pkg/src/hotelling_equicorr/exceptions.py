"""Exception hierarchy shared by every module of the package."""


class HotellingError(Exception):
    """Base class for all errors raised by hotelling_equicorr."""


class InvalidInput(HotellingError, ValueError):
    """An argument is outside the domain an operation accepts."""


class DimensionMismatch(InvalidInput):
    """Two samples do not have the same number of variables."""


class DegenerateDimension(HotellingError):
    """n >= n_x + n_y - 1, so the pooled covariance is necessarily singular.

    Use :func:`hotelling_equicorr.hotelling.permutation_test` instead.
    """


class NotPositiveDefinite(HotellingError, ArithmeticError):
    """A Cholesky pivot fell below the positive-definiteness threshold."""


class EigenFailure(HotellingError, ArithmeticError):
    """The Jacobi eigensolver hit its sweep cap without converging."""
