"""Exception types shared across the package."""


class HyperQkdError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(HyperQkdError, ValueError):
    """Raised when parameters or inputs violate a documented precondition."""


class InvalidStateError(HyperQkdError, ValueError):
    """Raised when a state vector or distribution fails its invariants."""
