"""Bit-level index arithmetic for partial traces.

Two primitives drive everything:

* ``scatter``: embed a compact (N-M)-bit index into the kept bit
  positions of an N-bit index, zeros at traced positions. E.g. with
  N=6 and kept positions {1,3,5}, scatter(0b10) = 0b000100 = 4.
* trace offsets: every subset of the traced place values sums to one
  offset; the 2^M offsets are exactly the submasks of trace_mask.

For a reduced-matrix element (l, m) the contributing full-matrix
elements are (scatter(l)+off, scatter(m)+off) over all offsets, the
same offset added to row and column. These index sets partition the
full index range, which the tests check exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import IndexOutOfRange
from .model import TraceSpec


def bit_positions(mask: int) -> tuple[int, ...]:
    """0-based positions of the set bits of mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def iter_submasks(mask: int) -> Iterator[int]:
    """All submasks of mask in ascending numeric order, 0 first.

    Branch-free increment: s -> (s - mask) & mask walks the submasks in
    the same order as scattering a counter over mask's bit positions.
    """
    s = 0
    while True:
        yield s
        s = (s - mask) & mask
        if s == 0:
            return


def _scatter_all(mask: int, n_bits_in: int) -> np.ndarray:
    """scatter(l) for every l in [0, 2^n_bits_in), as an int64 array."""
    out = np.zeros(1 << n_bits_in, dtype=np.int64)
    counter = np.arange(1 << n_bits_in, dtype=np.int64)
    for j, b in enumerate(bit_positions(mask)):
        out |= (counter >> j & 1) << b
    return out


@dataclass(frozen=True)
class IndexEmbedding:
    """The map l -> l' placing reduced-space bits at the kept positions."""

    n_bits: int
    kept_mask: int
    kept_bits: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if not 0 <= self.kept_mask < (1 << self.n_bits):
            raise IndexOutOfRange(
                f"kept_mask {self.kept_mask:#x} does not fit in {self.n_bits} bits"
            )
        object.__setattr__(self, "kept_bits", bit_positions(self.kept_mask))

    @classmethod
    def from_spec(cls, spec: TraceSpec) -> "IndexEmbedding":
        return cls(spec.layout.n_qubits, spec.kept_mask)

    @property
    def n_kept(self) -> int:
        return len(self.kept_bits)

    def scatter(self, l: int) -> int:
        """Place bit j of l at the j-th smallest kept position."""
        if not 0 <= l < (1 << self.n_kept):
            raise IndexOutOfRange(f"index {l} outside [0, 2^{self.n_kept})")
        out = 0
        for j, b in enumerate(self.kept_bits):
            out |= (l >> j & 1) << b
        return out

    def gather(self, full_index: int) -> int:
        """Extract the kept bits of full_index, compacted; inverse of scatter."""
        if not 0 <= full_index < (1 << self.n_bits):
            raise IndexOutOfRange(
                f"index {full_index} outside [0, 2^{self.n_bits})"
            )
        out = 0
        for j, b in enumerate(self.kept_bits):
            out |= (full_index >> b & 1) << j
        return out

    def scatter_all(self) -> np.ndarray:
        """Vectorized scatter of every reduced index, ascending."""
        return _scatter_all(self.kept_mask, self.n_kept)

    def gather_all(self) -> np.ndarray:
        """gather(i) for every full index i, as an int64 array."""
        out = np.zeros(1 << self.n_bits, dtype=np.int64)
        full = np.arange(1 << self.n_bits, dtype=np.int64)
        for j, b in enumerate(self.kept_bits):
            out |= (full >> b & 1) << j
        return out


def enumerate_eta(spec: TraceSpec) -> np.ndarray:
    """All 2^M trace offsets: subset sums of the traced place values.

    Equivalently the submasks of trace_mask, emitted in ascending
    numeric order (offset 0 first). Row and column of a contributing
    element always receive the same offset.
    """
    return _scatter_all(spec.trace_mask, spec.n_traced)


def element_index_pairs(spec: TraceSpec, l: int, m: int) -> list[tuple[int, int]]:
    """The 2^M full-matrix (row, col) pairs summed into reduced element (l, m)."""
    emb = IndexEmbedding.from_spec(spec)
    row_base = emb.scatter(l)
    col_base = emb.scatter(m)
    return [(row_base + off, col_base + off) for off in iter_submasks(spec.trace_mask)]
