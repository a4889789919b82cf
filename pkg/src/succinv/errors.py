"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SuccinvError(Exception):
    """Base class for every error raised by this package."""


class InputError(SuccinvError, ValueError):
    """An argument violates an operation's precondition."""


class FormatError(InputError):
    """A text file does not follow its line format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormulaSyntaxError(InputError):
    """Formula text does not match the grammar.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class ArityError(InputError):
    """A relation symbol is used with the wrong number of arguments."""


class EvaluationError(InputError):
    """Evaluation was asked for a formula with unbound free variables."""


class CapabilityError(SuccinvError):
    """An exhaustive search was asked to run beyond its size guard."""


class ClassificationError(SuccinvError):
    """A decomposition does not meet the structural guarantee for ``c``."""

    def __init__(self, message: str, failing_nodes: list[int] | None = None):
        self.failing_nodes = list(failing_nodes or [])
        super().__init__(message)


class InvariantViolation(SuccinvError, AssertionError):
    """A construction broke one of its own bookkeeping invariants."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


class UnsupportedError(SuccinvError):
    """The requested strategy is not available for these parameters."""
