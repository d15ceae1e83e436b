"""Exception hierarchy shared by every dualprec subsystem."""


class DualprecError(Exception):
    """Base class for all errors raised by this package."""


class RangeError(DualprecError):
    """A value left the representable range of the target format."""


class DivideByZeroError(DualprecError, ZeroDivisionError):
    """Division by a pair whose components are both zero."""


class DomainError(DualprecError):
    """An argument outside the mathematical domain of the operation."""


class CapacityError(DualprecError):
    """A request would exceed practical memory or configured limits."""


class ValidationError(DualprecError):
    """Structurally invalid input (empty dataset, bad parameter record)."""


class ParseError(DualprecError):
    """Malformed input content; carries a line number when one is known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SchemaError(DualprecError):
    """Input is well-formed but violates the expected schema."""


class IoError(DualprecError):
    """Underlying byte sink or source failed."""


class DeviceError(DualprecError):
    """No usable rendering device; message names the missing capability."""


class FeatureError(DualprecError):
    """The selected device lacks a feature required by a pipeline variant."""


class ShaderError(DualprecError):
    """A shader module failed validation or did not match its interface."""
