"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A parameter, config entry, or argument failed validation."""


class DegenerateSourceError(ValidationError):
    """Both interferometer arms carry zero intensity; no single-photon state exists."""


class BracketError(RuntimeError):
    """A search bracket does not actually bracket the target sign change."""


class UndefinedQberError(ArithmeticError):
    """Zero gain: the error rate of an empty detection record is undefined."""
