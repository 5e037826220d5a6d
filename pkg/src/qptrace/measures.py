"""Entanglement measures consuming reduced density matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import backend as _backend
from .errors import CostGuardExceeded, InvalidSpectrum, NotHermitian, PositionOutOfRange
from .kernels import powerset_trace_pure
from .model import DensityMatrix, StateVector, make_trace_spec

#: Dense eigensolve guard.
EIGENSOLVE_MAX_DIM = 1 << 12

#: Eigenvalues below this are treated as exact zeros in entropies.
EIGENVALUE_CUTOFF = 1e-12

#: Eigenvalues in [-NEGATIVE_SLACK, 0) are clamped to 0; below is an error.
NEGATIVE_SLACK = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues of a Hermitian matrix, descending."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=np.float64)
        vals.setflags(write=False)
        object.__setattr__(self, "eigenvalues", vals)


def purity(rho: DensityMatrix) -> float:
    """Sum of squared entry magnitudes; equals trace of rho^2 for
    Hermitian rho. 1 for a pure state, 1/dim for maximally mixed."""
    return float(np.sum(np.abs(rho.entries) ** 2))


def _check_hermitian(rho: DensityMatrix, tol: float) -> None:
    defect = float(np.max(np.abs(rho.entries - rho.entries.conj().T)))
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {tol:.3e}")


def hermitian_eigensystem(
    rho: DensityMatrix,
    herm_tol: float = 1e-10,
    tol: float = 1e-12,
    max_sweeps: int = 60,
    with_vectors: bool = True,
    backend: str | None = None,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigenvalues (descending) and matching eigenvectors (columns) via
    the package's cyclic Jacobi solver; no external solver involved."""
    if rho.dim > EIGENSOLVE_MAX_DIM:
        raise CostGuardExceeded(f"dense eigensolve capped at dim {EIGENSOLVE_MAX_DIM}")
    _check_hermitian(rho, herm_tol)
    work = np.array(rho.entries, dtype=np.complex128)  # solver works in place
    w, v = _backend.kernel_module(backend).jacobi_eigh(work, with_vectors, tol, max_sweeps)
    order = np.argsort(w)[::-1]
    w = np.asarray(w)[order]
    if v is not None:
        v = np.asarray(v)[:, order]
    return w, v


def hermitian_eigenvalues(rho: DensityMatrix, **kwargs) -> Spectrum:
    """Spectrum of a Hermitian matrix, descending."""
    w, _ = hermitian_eigensystem(rho, with_vectors=False, **kwargs)
    return Spectrum(w)


def _entropy_of_eigenvalues(vals: np.ndarray, log_base: float) -> float:
    if float(np.min(vals)) < -NEGATIVE_SLACK:
        raise InvalidSpectrum(
            f"eigenvalue {float(np.min(vals)):.3e} below -{NEGATIVE_SLACK:.0e}; "
            "upstream reduction is not a valid state"
        )
    vals = np.clip(vals, 0.0, 1.0)
    vals = vals[vals > EIGENVALUE_CUTOFF]
    if vals.size == 0:
        return 0.0
    return float(-np.sum(vals * np.log(vals)) / math.log(log_base))


def von_neumann_entropy(
    rho: DensityMatrix, log_base: float = 2.0, backend: str | None = None
) -> float:
    """Entropy -sum(w log w) of the eigenvalue distribution.

    Base 2 by default (bits); pass math.e for nats. Eigenvalues are
    clamped to [0, 1]; values below -1e-10 raise InvalidSpectrum.
    """
    spectrum = hermitian_eigenvalues(rho, backend=backend)
    return _entropy_of_eigenvalues(spectrum.eigenvalues, log_base)


def block_entropy(
    psi: StateVector,
    block_positions: Sequence[int],
    log_base: float = 2.0,
    backend: str | None = None,
) -> float:
    """Entropy of the reduced state of a block of qubit positions in a
    pure state, obtained by tracing out the block's complement. The
    block may be any proper nonempty subset, contiguous or not."""
    n = psi.layout.n_qubits
    block = sorted(set(block_positions))
    if not block:
        raise PositionOutOfRange("block must be nonempty")
    if len(block) != len(list(block_positions)):
        raise PositionOutOfRange("block positions must be distinct")
    for p in block:
        if not 1 <= p <= n:
            raise PositionOutOfRange(f"position {p} outside 1..{n}")
    if len(block) == n:
        raise PositionOutOfRange("block must be a proper subset")
    complement = [p for p in range(1, n + 1) if p not in block]
    spec = make_trace_spec(psi.layout, complement)
    reduced = powerset_trace_pure(psi, spec, backend=backend)
    return von_neumann_entropy(reduced.matrix, log_base=log_base, backend=backend)
