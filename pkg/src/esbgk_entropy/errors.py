"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class BracketFailure(RuntimeError):
    """No sign change of the stationarity function was found."""


class DegenerateTriple(ValueError):
    """All eigenvalues coincide, so the log-ratio is 0/0."""


class InfeasibleSP(ValueError):
    """No positive triple has the requested sum and product."""


class NonPositiveDensity(ValueError):
    pass


class SingularTensor(ValueError):
    pass


class PositivityLoss(RuntimeError):
    """A time step produced a non-positive nodal value (dt too large)."""
