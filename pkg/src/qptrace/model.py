"""State containers, index conventions, and the trace specification.

Index convention (load-bearing, used by every kernel in this package):
qubit positions are 1-based and position ``i`` is bit ``i - 1`` of a
computational-basis index. Position 1 is therefore the least significant
bit, i.e. the *rightmost* symbol in ket notation::

    |b_N ... b_2 b_1>   <->   index  b_N * 2^(N-1) + ... + b_2 * 2 + b_1

A reversed convention passes most symmetric tests but produces wrong
index sets for non-contiguous traces, so it is fixed here once and
documented in the README.

All containers are immutable after construction (arrays are marked
read-only); they can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .alloc import note_matrix_allocation
from .errors import (
    DimensionMismatch,
    DuplicatePosition,
    FullTraceNotASpec,
    PositionOutOfRange,
)

#: Default cap on N; 2^30 amplitudes is already 16 GiB as complex128.
DEFAULT_MAX_QUBITS = 30

#: Positivity checks are skipped above this dimension (dense eigensolve guard).
EIGENCHECK_MAX_DIM = 1 << 12


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances for state validation."""

    norm: float = 1e-10
    herm: float = 1e-10
    trace: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class QubitLayout:
    """Number of qubits plus the fixed position-to-bit mapping above."""

    n_qubits: int
    max_qubits: int = DEFAULT_MAX_QUBITS

    def __post_init__(self):
        if not 1 <= self.n_qubits <= self.max_qubits:
            raise PositionOutOfRange(
                f"n_qubits must be in 1..{self.max_qubits}, got {self.n_qubits}"
            )

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def bit_of(self, position: int) -> int:
        """Bit index of a 1-based qubit position."""
        if not 1 <= position <= self.n_qubits:
            raise PositionOutOfRange(
                f"position {position} outside 1..{self.n_qubits}"
            )
        return position - 1


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Pure state: 2^N complex amplitudes indexed by basis label."""

    layout: QubitLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != self.layout.dim:
            raise DimensionMismatch(
                f"expected {self.layout.dim} amplitudes for N={self.layout.n_qubits}, "
                f"got shape {self.amplitudes.shape}"
            )
        object.__setattr__(self, "amplitudes", _freeze(amps))

    @property
    def n_qubits(self) -> int:
        return self.layout.n_qubits

    def norm_defect(self) -> float:
        """|sum |psi_i|^2 - 1|, zero for a normalized state."""
        return abs(float(np.sum(np.abs(self.amplitudes) ** 2)) - 1.0)

    def is_normalized(self, tol: float = DEFAULT_TOLERANCES.norm) -> bool:
        return self.norm_defect() <= tol


@dataclass(frozen=True)
class DensityMatrix:
    """Dense square complex matrix, row-major, entry (r, c) at offset r*dim + c.

    The constructor checks only structure; physical-state properties
    (Hermiticity, unit trace, positivity) are reported by
    :func:`validate_density`. ``normalized`` records whether the matrix
    is meant to be a unit-trace physical state.
    """

    entries: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        mat = np.ascontiguousarray(self.entries, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise DimensionMismatch(f"expected a square matrix, got shape {mat.shape}")
        object.__setattr__(self, "entries", _freeze(mat))
        note_matrix_allocation(mat.shape[0])

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class TraceSpec:
    """Which qubit positions to trace out, with derived bit masks.

    Derived fields:
      trace_mask     bits i-1 set for every traced position i
      kept_mask      complement of trace_mask within N bits
      place_values   2^(i-1) for each traced position, ascending
      kept_positions the untraced positions, ascending
    """

    layout: QubitLayout
    traced_positions: tuple[int, ...]
    trace_mask: int = field(init=False)
    kept_mask: int = field(init=False)
    place_values: tuple[int, ...] = field(init=False)
    kept_positions: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        n = self.layout.n_qubits
        positions = tuple(sorted(int(p) for p in self.traced_positions))
        for p in positions:
            if not 1 <= p <= n:
                raise PositionOutOfRange(f"position {p} outside 1..{n}")
        if len(set(positions)) != len(positions):
            dupes = sorted({p for p in positions if positions.count(p) > 1})
            raise DuplicatePosition(f"duplicate positions {dupes}")
        if len(positions) == n:
            raise FullTraceNotASpec(
                "tracing every qubit yields a scalar; call full_trace instead"
            )
        mask = 0
        for p in positions:
            mask |= 1 << (p - 1)
        object.__setattr__(self, "traced_positions", positions)
        object.__setattr__(self, "trace_mask", mask)
        object.__setattr__(self, "kept_mask", ((1 << n) - 1) ^ mask)
        object.__setattr__(self, "place_values", tuple(1 << (p - 1) for p in positions))
        object.__setattr__(
            self,
            "kept_positions",
            tuple(p for p in range(1, n + 1) if not mask >> (p - 1) & 1),
        )

    @property
    def n_traced(self) -> int:
        return len(self.traced_positions)

    @property
    def n_kept(self) -> int:
        return self.layout.n_qubits - self.n_traced

    @property
    def reduced_dim(self) -> int:
        return 1 << self.n_kept


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """Partial-trace output with provenance: which method, which spec."""

    matrix: DensityMatrix
    method: str
    spec: TraceSpec

    def __post_init__(self):
        if self.matrix.dim != self.spec.reduced_dim:
            raise DimensionMismatch(
                f"reduced matrix dim {self.matrix.dim} != 2^(N-M) = {self.spec.reduced_dim}"
            )


def make_trace_spec(layout: QubitLayout, positions: Sequence[int]) -> TraceSpec:
    """Build a TraceSpec; positions may come in any order."""
    return TraceSpec(layout, tuple(positions))


def full_trace(rho: DensityMatrix) -> complex:
    """Sum of diagonal entries (the M = N corner TraceSpec excludes)."""
    return complex(np.trace(rho.entries))


@dataclass(frozen=True)
class ValidationReport:
    """Report-only diagnostics from validate_density."""

    dim: int
    normalized: bool
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float | None

    def ok(self, tol: Tolerances = DEFAULT_TOLERANCES, psd_slack: float = 1e-10) -> bool:
        good = self.hermiticity_defect <= tol.herm
        if self.normalized:
            good = good and self.trace_defect <= tol.trace
        if self.min_eigenvalue is not None:
            good = good and self.min_eigenvalue >= -psd_slack
        return good


def validate_density(
    rho: DensityMatrix,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    check_positivity: bool | None = None,
) -> ValidationReport:
    """Measure Hermiticity and trace defects; optionally the minimum eigenvalue.

    Positivity is checked by default only for dim <= 2^12 (dense solve);
    pass check_positivity=True/False to force either way. Report-only:
    never raises on a bad state.
    """
    mat = rho.entries
    herm_defect = float(np.max(np.abs(mat - mat.conj().T)))
    trace_defect = abs(complex(np.trace(mat)) - 1.0)
    if check_positivity is None:
        check_positivity = rho.dim <= EIGENCHECK_MAX_DIM
    min_eig = None
    if check_positivity:
        # Bulk validation path; the self-contained solver lives in measures.
        min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)[0])
    return ValidationReport(
        dim=rho.dim,
        normalized=rho.normalized,
        hermiticity_defect=herm_defect,
        trace_defect=float(trace_defect),
        min_eigenvalue=min_eig,
    )


def density_from_pure(psi: StateVector) -> DensityMatrix:
    """Rank-1 projector |psi><psi| as an explicit dense matrix."""
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()))
