"""Exception types raised by the isodw numerics."""


class IsoDWError(Exception):
    """Base class for all library errors."""


class NumericalError(IsoDWError):
    """A numerical procedure failed to deliver a trustworthy result."""


class NonConvergence(NumericalError):
    pass


class NonFinite(NumericalError):
    pass


class DomainTooSmall(NumericalError):
    """An eigenvector still has appreciable amplitude at a Dirichlet wall."""


class OnePeak(NumericalError):
    """The zero mode has a single maximum, so no two-well comparison exists."""


class Degenerate(NumericalError):
    """The two wells cannot be told apart within tolerance."""


class Unsupported(IsoDWError, ValueError):
    pass


class SingularGamma(IsoDWError, ValueError):
    """gamma hits the range of gamma(x); the family member has poles."""

    def __init__(self, gamma: float, gamma_range: tuple[float, float]):
        self.gamma = gamma
        self.gamma_range = gamma_range
        lo, hi = gamma_range
        super().__init__(
            f"gamma={gamma:g} lies inside the range of gamma(x) [{lo:g}, {hi:g}]; "
            "the family member is singular"
        )


class NoCrossing(IsoDWError):
    """The peak-height difference keeps one sign over the searched gamma range."""


class PoleAtTurningPoint(IsoDWError, ValueError):
    pass


class Overflow(NumericalError):
    """log_weight exceeded the configured cap."""
