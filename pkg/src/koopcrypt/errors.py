"""Exception hierarchy shared by every koopcrypt module."""


class KoopcryptError(Exception):
    """Base class for all library errors."""


class DomainError(KoopcryptError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NoInverseError(DomainError):
    pass


class KeyGenerationError(DomainError):
    pass


class TrajectoryRangeError(KoopcryptError, IndexError):
    """Not enough trajectory data and no period to wrap indices with."""


class InversionError(KoopcryptError):
    """A lifted state could not be mapped back to a residue."""


class InfeasibleDimensionError(KoopcryptError):
    """No companion recurrence of the requested dimension exists."""


class NonDiagonalizableError(KoopcryptError):
    pass


class RankDeficientError(KoopcryptError):
    """The snapshot matrix lacks full row rank; reduce the lifting dimension."""


class RecoveryError(KoopcryptError):
    """The spectral search did not produce a consistent exponent."""


class InsufficientSpectrumError(RecoveryError):
    """Every usable eigenvalue is real, so angles carry no information."""


class DegenerateCoordinateError(RecoveryError):
    pass
