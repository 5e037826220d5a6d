"""Exception types raised across the package."""


class QptraceError(Exception):
    """Base class for all package errors."""


class DuplicatePosition(QptraceError):
    """A qubit position was listed more than once."""


class PositionOutOfRange(QptraceError):
    """A qubit position lies outside 1..N."""


class FullTraceNotASpec(QptraceError):
    """All qubits were requested; use full_trace, which yields a scalar."""


class IndexOutOfRange(QptraceError):
    """A basis-state index lies outside the valid range."""


class DimensionMismatch(QptraceError):
    """Matrix or vector dimension does not match the declared subsystem split."""


class LayoutMismatch(QptraceError):
    """State and trace specification disagree on the qubit layout."""


class CostGuardExceeded(QptraceError):
    """Requested computation exceeds a configured cost bound."""


class NotHermitian(QptraceError):
    """Matrix fails the Hermiticity tolerance."""


class InvalidSpectrum(QptraceError):
    """Eigenvalues are incompatible with a density matrix (e.g. strongly negative)."""


class ValidationFailed(QptraceError):
    """State failed a strict validation gate."""


class FormatError(QptraceError):
    """State file header or structure is malformed."""


class TruncatedFile(QptraceError):
    """State file ends before the declared payload is complete."""


class InvalidValue(QptraceError):
    """State file contains a NaN or infinite entry."""
