"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when inputs violate an operation's mathematical domain."""


class ResourceError(RuntimeError):
    """Raised when a computation would exceed a configured resource cap."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative routine fails to converge and no partial
    result makes sense."""
