"""Exception and warning types shared across the package."""


class CatmapsError(Exception):
    """Base class for package errors."""


class DimensionError(CatmapsError, ValueError):
    """Matrix has the wrong shape (e.g. odd-dimensional input)."""


class NonSymplecticError(CatmapsError, ValueError):
    """Integer matrix fails the symplectic block identities or det != 1."""


class DegenerateMapError(CatmapsError, ValueError):
    """det(I - g) = 0 (or a singular modulus matrix was supplied)."""


class NotApplicableError(CatmapsError, ValueError):
    """Requested construction does not apply (e.g. gcd(c, N) > 1)."""


class PeriodNotFoundError(CatmapsError, RuntimeError):
    """Iteration cap hit before the period was found."""


class ConsistencyError(CatmapsError, RuntimeError):
    """Two constructions that must agree up to a scalar do not."""


class NumericalContractError(CatmapsError, RuntimeError):
    """A certified numerical bound (residual contract) was violated."""


class ResampleError(CatmapsError, RuntimeError):
    """Sample set too ill-conditioned for a least-squares estimate."""


class ParityWarning(UserWarning):
    """Theta-parity condition (N*a*c, N*b*d even) violated."""
