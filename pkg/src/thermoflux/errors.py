"""Exception hierarchy shared by all thermoflux modules."""


class ThermofluxError(Exception):
    """Base class for all thermoflux errors."""


class DivergentPartition(ThermofluxError):
    """Partition sum does not converge (requires beta * a > 0)."""


class DomainError(ThermofluxError):
    """Argument outside the mathematical domain of the operation."""


class OrderTooLarge(ThermofluxError):
    """Requested cumulant/coefficient order exceeds the supported cap."""


class InsufficientSamples(ThermofluxError):
    """Too few Monte-Carlo samples for the requested estimator."""


class NoBracket(ThermofluxError):
    """Root bracketing failed (should not occur for valid inputs)."""


class DegeneratePoint(ThermofluxError):
    """Interpolation point where the oscillator parameters degenerate."""


class IllConditioned(ThermofluxError):
    """Moment-matching linear system is singular."""


class QuadratureFailure(ThermofluxError):
    """Numerical quadrature failed its self-consistency check."""


class GridTooSmall(ThermofluxError):
    """Grid does not cover enough standard deviations for the operation."""


class SingularTime(ThermofluxError):
    """Propagator evaluated at a singular time (sin t too close to zero)."""


class ConfigError(ThermofluxError):
    """Invalid run configuration (CLI/front-end level)."""
