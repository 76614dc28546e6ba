"""Exception types raised by the simulator."""


class SSEError(Exception):
    """Base class for all errors raised by :mod:`sse_fd`."""


class DomainError(SSEError, ValueError):
    """An argument lies outside the domain an operation supports."""


class SingularParameterError(SSEError, ValueError):
    """A derived quantity hits a pole (e.g. ``delta**2 == omega_e**2``)."""


class RegimeError(SSEError, ValueError):
    """Parameters fall outside the regime where a closed form is valid."""


class NoResonanceError(SSEError):
    """No sign change of the effective detuning could be bracketed."""


class NoSteadyStateError(SSEError):
    """The dissipative model has no unique steady state."""


class NumericalError(SSEError):
    """A numerical routine failed to reach its accuracy target.

    ``achieved`` carries the tolerance or error estimate that was reached,
    when one is available.
    """

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class AccuracyError(NumericalError):
    """An accuracy budget (norm, trace, positivity, grid) was exceeded."""


class StiffnessError(NumericalError):
    """The adaptive integrator failed, typically by step-size underflow."""


class ResolutionError(NumericalError):
    """A time series is too short to resolve the requested spectral feature."""


class ConfigError(SSEError, ValueError):
    """Invalid scenario configuration."""
