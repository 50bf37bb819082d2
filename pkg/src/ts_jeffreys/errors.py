class TsJeffreysError(Exception):
    """Base class for every error raised by ts_jeffreys."""


class DomainError(TsJeffreysError, ValueError):
    """An observation lies outside the support or a parameter outside its domain."""


class PosteriorStateError(TsJeffreysError, RuntimeError):
    """A posterior cannot be evaluated or sampled in its current state."""


class ConfigError(TsJeffreysError, ValueError):
    """An experiment or lab configuration was rejected."""


class BoundViolationError(TsJeffreysError):
    """An empirical tail exceeded its theoretical bound beyond Monte Carlo slack."""
