"""Exception types shared across the package."""


class Error(Exception):
    """Base class for all package-specific errors."""


class GroupParseError(Error, ValueError):
    pass


class NewickParseError(Error, ValueError):
    """Syntax error in Newick input; ``position`` is a 0-based text offset."""

    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class InvalidTreeError(Error, ValueError):
    """Structurally invalid tree (labels, valencies, leaf count, ...)."""


class FlowError(Error, ValueError):
    """Leaf values do not sum to zero, or flows are incompatible."""


class BinomialError(Error, ValueError):
    """Flow multisets do not project to equal per-edge multisets."""

    def __init__(self, message: str, edge: int | None = None):
        super().__init__(message)
        self.edge = edge


class LatticeError(Error, ValueError):
    """Dimension mismatch or containment failure between lattices."""


class OutsideSpanError(LatticeError):
    """A vector lies outside the rational span of the target lattice."""


class FlowCapExceeded(Error, RuntimeError):
    """The flow enumeration would exceed the configured cap."""


class Cancelled(Error, RuntimeError):
    """A long-running lattice computation was cancelled cooperatively."""
