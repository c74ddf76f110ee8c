"""Exception types. The CLI maps each family to its own exit code."""


class ConfigError(ValueError):
    """Invalid user-supplied parameters."""


class UnsupportedSizeError(ConfigError):
    """Register size the compiler cannot handle (the sign matrix is singular)."""


class NumericalError(ArithmeticError):
    """A numerical check failed (non-PSD state, ill-conditioned solve, ...)."""
