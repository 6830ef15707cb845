"""
Exception types raised by the graph, zeta and walk modules.
"""
from typing import Optional


class CrwSpectraError(Exception):
    """Base class for every error raised by this package."""


class GraphInputError(CrwSpectraError, ValueError):
    """Edge-list or generator input that does not describe a valid simple connected graph."""

    def __init__(self, message: str, line: Optional[int] = None, components: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
        self.components = components


class InapplicableError(CrwSpectraError, ValueError):
    """The graph does not satisfy the hypothesis of the requested closed form."""


class PoleProximityError(CrwSpectraError, ValueError):
    """A sample point lies within the pole guard of a denominator."""

    def __init__(self, message: str, point: complex, edge: Optional[int] = None):
        if edge is not None:
            message = f"{message} (edge {edge})"
        super().__init__(f"sample point too close to pole at {point}: {message}")
        self.point = point
        self.edge = edge


class CoinError(CrwSpectraError, ValueError):
    """Coin parameters outside [0, 1] or violating a + c = b + d = 1."""


class CardinalityError(CrwSpectraError, ValueError):
    """Two spectra compared as multisets have different sizes."""

    def __init__(self, left: int, right: int):
        super().__init__(f"cardinality mismatch: {left} vs {right}")
        self.left = left
        self.right = right


class ConvergenceError(CrwSpectraError, RuntimeError):
    """The dense eigen-solver failed or its residual contract was violated."""


class SignResolutionError(CrwSpectraError, RuntimeError):
    """Neither, or both, bipartite sign conventions reproduce the arc determinant."""
