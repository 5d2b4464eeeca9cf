"""Exception and warning types used across the package."""

__all__ = [
    "BimodalError",
    "DimensionCapError",
    "NegativeArgError",
    "IndexOutOfRangeError",
    "NoAtomsError",
    "AtomCountMismatchError",
    "TruncationError",
    "NotHermitianError",
    "SpaceMismatchError",
    "StepTooLargeError",
    "NormDriftError",
    "NotCoprimeError",
    "EmptyGridError",
    "ZeroDetuningError",
    "ZeroDriveError",
    "TruncationWarning",
    "GridTooCoarseWarning",
    "NotPrimeWarning",
    "LargeStepWarning",
]


class BimodalError(Exception):
    """Base class for all errors raised by this package."""


class DimensionCapError(BimodalError, ValueError):
    """Requested Hilbert space exceeds the hard dimension cap."""


class NegativeArgError(BimodalError, ValueError):
    """An argument that must be non-negative was negative."""


class IndexOutOfRangeError(BimodalError, IndexError):
    """Occupation number or atom index outside the space."""


class NoAtomsError(BimodalError, ValueError):
    """Atomic operator requested on a space without atoms."""


class AtomCountMismatchError(BimodalError, ValueError):
    """Space and parameters disagree about the number of atoms."""


class TruncationError(BimodalError, ValueError):
    """Photon-number cutoff too small for the requested state."""


class NotHermitianError(BimodalError, ValueError):
    """Operator expected to be Hermitian is not, beyond tolerance."""


class SpaceMismatchError(BimodalError, ValueError):
    """Operands live on different Hilbert spaces."""


class StepTooLargeError(BimodalError, ValueError):
    """Integrator step exceeds the resolution rule for the fastest phase."""


class NormDriftError(BimodalError, RuntimeError):
    """State norm drifted beyond tolerance during time stepping."""


class NotCoprimeError(BimodalError, ValueError):
    """Revival schedule requires a fraction in lowest terms."""


class EmptyGridError(BimodalError, ValueError):
    """A sampling grid with zero points was requested."""


class ZeroDetuningError(BimodalError, ZeroDivisionError):
    """Dispersive parameters are undefined at zero detuning."""


class ZeroDriveError(BimodalError, ZeroDivisionError):
    """Second-order effective parameters are undefined at zero drive."""


class TruncationWarning(UserWarning):
    """Photon-number cutoff leaves a small but non-negligible tail."""


class GridTooCoarseWarning(UserWarning):
    """Phase-space grid may undersample structure of the distribution."""


class NotPrimeWarning(UserWarning):
    """Revival fraction denominator is not prime; packets may coincide."""


class LargeStepWarning(UserWarning):
    """Integrator step accepted above the resolution rule by request."""
