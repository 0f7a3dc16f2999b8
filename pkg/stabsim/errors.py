"""Exception hierarchy shared by every stabsim module."""


class StabError(Exception):
    """Base error. `line` and `position` are 1-based when known."""

    def __init__(self, message: str, *, line: int | None = None, position: int | None = None):
        self.line = line
        self.position = position
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParseError(StabError, ValueError):
    pass


class DimensionError(StabError, ValueError):
    pass


class InvalidSizeError(StabError, ValueError):
    pass


class InvalidGateError(StabError, ValueError):
    pass


class UnsupportedError(StabError, ValueError):
    """Construct outside the supported subset (QASM features, mid-circuit measurement)."""


class UnsupportedGateError(UnsupportedError):
    """Gate that the requested path cannot execute, e.g. T in a CHP tableau."""


class InvariantError(StabError, RuntimeError):
    pass


class ConfigError(StabError, ValueError):
    pass


__all__ = [
    "ConfigError",
    "DimensionError",
    "InvalidGateError",
    "InvalidSizeError",
    "InvariantError",
    "ParseError",
    "StabError",
    "UnsupportedError",
    "UnsupportedGateError",
]
