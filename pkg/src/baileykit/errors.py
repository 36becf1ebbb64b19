"""Exception hierarchy shared by every module of the package."""


class QSeriesError(Exception):
    """Base class for failures while building or comparing q-series."""


class OutOfWindowError(QSeriesError):
    """A coefficient was requested at or beyond the guaranteed order."""


class InsufficientOrderError(QSeriesError):
    """A comparison asked for more terms than the operands guarantee."""


class NonInvertibleError(QSeriesError):
    """Leading coefficient is not a unit of the integers."""


class SubstitutionError(QSeriesError):
    """q -> -q^k applied to a series with fractional exponents."""


class DivergenceError(QSeriesError):
    """A product or lattice sum does not converge q-adically."""


class DegenerateParameterError(QSeriesError):
    """A parameter value makes a constructor's formula singular."""


class PoleError(QSeriesError):
    """A specialization hits a pole of the summand."""


class UnsupportedParameterError(QSeriesError):
    """A parameter cannot be represented as a signed monomial on the lattice."""


class UsageError(Exception):
    """Bad request from a caller: unknown identity name or ill-typed binding."""


class UnknownIdentityError(UsageError):
    """No registry entry carries the requested name."""


class BindingError(UsageError):
    """A parameter binding names no parameter of the identity or has the wrong type."""
