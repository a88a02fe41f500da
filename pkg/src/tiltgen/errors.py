"""Exception hierarchy shared by every module."""


class TiltgenError(Exception):
    pass


class ValidationError(TiltgenError, ValueError):
    """An input object (configuration, fan, divisor) violates its invariants."""


class DimensionMismatch(ValidationError):
    pass


class UnsupportedError(TiltgenError):
    """The request is well formed but outside the range the engines handle."""


class IntegrityError(TiltgenError):
    """An internal consistency check failed (e.g. a negative h^1).

    This always signals a bug or an unsupported configuration, never bad input.
    """
