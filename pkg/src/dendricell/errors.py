"""Exception types shared across the package."""


class DendricellError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(DendricellError, ValueError):
    """An operation received an argument outside its domain."""


class ConfigError(DendricellError, ValueError):
    """A configuration value or combination is invalid."""


class TickOrderError(DendricellError, ValueError):
    """A deposit arrived with a tick older than the tissue clock."""


class StreamError(DendricellError, ValueError):
    """A stream line failed to parse; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ScenarioError(DendricellError, ValueError):
    """A scenario specification is structurally invalid."""
