"""Exception types raised across the package."""


class QuantumGraphError(Exception):
    """Base class for all errors raised by qgraph."""


class GraphConstructionError(QuantumGraphError, ValueError):
    """Invalid graph topology, lengths or lead placement."""


class BoundaryConditionError(QuantumGraphError, ValueError):
    """Vertex condition data violating self-adjointness or rank requirements."""


class SingularityError(QuantumGraphError, ArithmeticError):
    """A linear system that must be solved is numerically singular."""

    def __init__(self, message, k=None):
        super().__init__(message)
        self.k = k


class NotAnEigenvalueError(QuantumGraphError):
    """Raised when a kernel is requested at a wavenumber that is not a root."""

    def __init__(self, message, smallest_singular_value=None):
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value


class ExplosionError(QuantumGraphError):
    """An enumeration exceeded its configured size guard."""
