"""Exception types shared across the package."""


class SquidSimError(Exception):
    """Base class for all package-specific errors."""


class NormalizationError(SquidSimError):
    """A state vector is not normalized within the accepted tolerance."""


class NumericalValidityError(SquidSimError):
    """A numerical result is inconsistent with a valid density matrix."""


class IntegrationError(SquidSimError):
    """The adaptive integrator exceeded its step budget."""


class StabilityError(SquidSimError):
    """Norm drift of an integration exceeded the configured bound."""

    def __init__(self, message, time=None, drift=None):
        super().__init__(message)
        self.time = time
        self.drift = drift


class ScenarioIncompleteError(SquidSimError):
    """A scenario run did not exhibit all required stages."""

    def __init__(self, message, missing_stage=None):
        super().__init__(message)
        self.missing_stage = missing_stage


class ConfigError(SquidSimError):
    """Invalid run configuration (syntax, unknown key, or out-of-range value)."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
