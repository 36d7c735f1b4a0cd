"""Exception types raised across the package."""


class CartanLabError(ValueError):
    """Base class for all library errors."""

    code = "error"


class InvalidDimension(CartanLabError):
    code = "invalid-dimension"


class DimensionMismatch(CartanLabError):
    code = "dimension-mismatch"


class AmbientMismatch(CartanLabError):
    code = "ambient-mismatch"


class NotTriangular(CartanLabError):
    """Element does not lie in a+n."""

    code = "not-triangular"


class NotInAlgebra(CartanLabError):
    code = "not-in-algebra"


class NotInGroup(CartanLabError):
    code = "not-in-group"


class RealEigenvalue(CartanLabError):
    """Deformation matrix has a real eigenvalue."""

    code = "real-eigenvalue"


class InvalidParams(CartanLabError):
    code = "invalid-params"


class Unrealizable(CartanLabError):
    """The requested classification item has no realization."""

    code = "unrealizable"


class UnknownLabel(CartanLabError):
    code = "unknown-label"


class NotClosed(CartanLabError):
    code = "not-closed"


class UnsupportedInput(CartanLabError):
    code = "unsupported-input"


class InsufficientData(CartanLabError):
    code = "insufficient-data"


class NoPrediction(CartanLabError):
    code = "no-prediction"


class HypothesisViolated(CartanLabError):
    code = "hypothesis-violated"
