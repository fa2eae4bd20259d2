"""Contains the exceptions raised by tesp.

All of them derive from builtin exceptions so callers may catch either.
"""


class ShapeError(ValueError):
    """Operand dimensions or tube lengths do not conform."""


class ParameterError(ValueError):
    """An argument or configuration value is out of range."""


class DomainError(ValueError):
    """Input lies outside the domain of the operation (e.g. not T-SPD)."""


class PresetError(ValueError):
    """A special-case preset cannot be built for the given operands."""


class OracleBudgetError(RuntimeError):
    """Explicit block-circulant expansion would exceed the oracle budget."""


class InsufficientDataError(ValueError):
    """Too few usable points to estimate a quantity."""


# Errors the CLI reports as a one-line message.
USER_ERRORS = (
    ShapeError,
    ParameterError,
    DomainError,
    PresetError,
    OracleBudgetError,
    InsufficientDataError,
)
