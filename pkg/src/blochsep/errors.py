"""Exception hierarchy for blochsep."""


class BlochSepError(Exception):
    """Base class for every error raised by this package."""


class UsageError(BlochSepError, ValueError):
    """Bad arguments: empty factor lists, out-of-range indices, bad parameters."""


class ValidationError(BlochSepError, ValueError):
    """A matrix failed density-matrix validation.

    ``invariant`` names the violated property and ``magnitude`` says by how much.
    """

    invariant = "invalid"

    def __init__(self, message: str, magnitude: float = float("nan")):
        super().__init__(message)
        self.magnitude = magnitude


class ShapeMismatch(ValidationError):
    invariant = "shape"


class NonHermitian(ValidationError):
    invariant = "hermitian"


class TraceNotOne(ValidationError):
    invariant = "trace"


class NotPositiveSemidefinite(ValidationError):
    invariant = "positive_semidefinite"


class NumericalInconsistency(BlochSepError, ArithmeticError):
    """A quantity that must be real (or exact) came out with a large residue."""


class UnsupportedConvention(BlochSepError, ValueError):
    """The requested basis convention cannot be used for this operation."""
