"""Model checking for successor- and order-invariant first-order logic.

The package decides successor-invariant sentences on structures whose
Gaifman graphs admit a structured tree decomposition (by building a k-walk
through an edge-augmented supergraph), and order-invariant sentences on
coloured posets of bounded width (via Dilworth chain covers).
"""

from succinv.errors import (
    CapabilityError,
    ClassificationError,
    EvaluationError,
    FormatError,
    InputError,
    InvariantViolation,
    FormulaSyntaxError,
    UnsupportedError,
)
from succinv.graph import Graph

__all__ = [
    "CapabilityError",
    "ClassificationError",
    "EvaluationError",
    "FormatError",
    "Graph",
    "InputError",
    "InvariantViolation",
    "FormulaSyntaxError",
    "UnsupportedError",
]

__version__ = "0.1.0"
