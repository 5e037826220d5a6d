"""State file formats.

Text format::

    QSTATE 1 PURE <N>        (or MIXED)
    <re> <im>                one line per value; # lines are comments
    ...

A PURE payload holds 2^N amplitude lines; MIXED holds 4^N matrix
entries in row-major order. Decimal or scientific notation; values are
written with 17 significant digits so a text round-trip is lossless.

Binary format: magic ``QST1``, one kind byte (0 pure, 1 mixed), one
byte N, two reserved zero bytes, then the payload as little-endian
float64 (re, im) pairs. Round-trips bit-exactly.
"""

from __future__ import annotations

import math
import struct
import warnings
from pathlib import Path
from typing import BinaryIO, Iterable, TextIO, Union

import numpy as np

from .errors import FormatError, InvalidValue, TruncatedFile, ValidationFailed
from .model import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    QubitLayout,
    StateVector,
    Tolerances,
)

MAGIC = b"QST1"
_KIND_PURE, _KIND_MIXED = 0, 1

State = Union[StateVector, DensityMatrix]


class NormalizationWarning(UserWarning):
    """Parsed state misses the normalization tolerance."""


def _payload_length(kind: str, n: int) -> int:
    return (1 << n) if kind == "PURE" else (1 << n) ** 2


def _check_finite(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values.view(np.float64))):
        raise InvalidValue("payload contains NaN or infinite values")


def _wrap(kind: str, n: int, values: np.ndarray) -> State:
    if kind == "PURE":
        return StateVector(QubitLayout(n), values)
    dim = 1 << n
    return DensityMatrix(values.reshape(dim, dim))


def _normalization_defect(state: State) -> float:
    if isinstance(state, StateVector):
        return state.norm_defect()
    return abs(complex(np.trace(state.entries)) - 1.0)


def _parse_text(lines: Iterable[str]) -> State:
    it = iter(lines)
    header = None
    for raw in it:
        line = raw.strip()
        if line and not line.startswith("#"):
            header = line
            break
    if header is None:
        raise FormatError("empty state file")
    tokens = header.split()
    if len(tokens) != 4 or tokens[0] != "QSTATE":
        raise FormatError(f"bad header {header!r}; expected 'QSTATE 1 PURE|MIXED <N>'")
    if tokens[1] != "1":
        raise FormatError(f"unsupported format version {tokens[1]!r}")
    kind = tokens[2]
    if kind not in ("PURE", "MIXED"):
        raise FormatError(f"unknown state kind {kind!r}")
    try:
        n = int(tokens[3])
    except ValueError:
        raise FormatError(f"bad qubit count {tokens[3]!r}") from None
    if not 1 <= n <= 30:
        raise FormatError(f"qubit count {n} outside 1..30")

    expected = _payload_length(kind, n)
    values = np.empty(expected, dtype=np.complex128)
    count = 0
    for raw in it:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if count >= expected:
            raise FormatError(f"more than {expected} payload lines")
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected '<re> <im>', got {line!r}")
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError:
            raise FormatError(f"non-numeric value in {line!r}") from None
        if not (math.isfinite(re) and math.isfinite(im)):
            raise InvalidValue(f"non-finite value in {line!r}")
        values[count] = complex(re, im)
        count += 1
    if count < expected:
        raise TruncatedFile(f"payload has {count} of {expected} values")
    return _wrap(kind, n, values)


def _parse_binary(data: bytes) -> State:
    if len(data) < 8:
        raise FormatError("file shorter than the 8-byte binary header")
    if data[:4] != MAGIC:
        raise FormatError(f"bad magic {data[:4]!r}; expected {MAGIC!r}")
    kind_byte, n, r0, r1 = struct.unpack("<BBBB", data[4:8])
    if kind_byte not in (_KIND_PURE, _KIND_MIXED):
        raise FormatError(f"unknown kind byte {kind_byte}")
    if r0 != 0 or r1 != 0:
        raise FormatError("reserved header bytes must be zero")
    if not 1 <= n <= 30:
        raise FormatError(f"qubit count {n} outside 1..30")
    kind = "PURE" if kind_byte == _KIND_PURE else "MIXED"
    expected = _payload_length(kind, n)
    payload = data[8:]
    if len(payload) < 16 * expected:
        raise TruncatedFile(
            f"payload has {len(payload)} bytes, expected {16 * expected}"
        )
    if len(payload) > 16 * expected:
        raise FormatError(f"{len(payload) - 16 * expected} trailing bytes")
    values = np.frombuffer(payload, dtype="<c16").astype(np.complex128)
    _check_finite(values)
    return _wrap(kind, n, values)


def parse_state_file(
    path: Union[str, Path],
    strict: bool = False,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> State:
    """Read a state file, auto-detecting text vs binary by the magic bytes.

    Normalization (unit norm / unit trace) is checked on load: a miss
    warns, or raises FormatError under strict.
    """
    data = Path(path).read_bytes()
    if data[:4] == MAGIC:
        state = _parse_binary(data)
    else:
        state = _parse_text(data.decode("utf-8", errors="replace").splitlines())
    defect = _normalization_defect(state)
    tol = tolerances.norm if isinstance(state, StateVector) else tolerances.trace
    if defect > tol:
        message = f"normalization defect {defect:.3e} exceeds {tol:.0e}"
        if strict:
            raise ValidationFailed(message)
        warnings.warn(message, NormalizationWarning, stacklevel=2)
    return state


def _header_fields(state: State) -> tuple[str, int, np.ndarray]:
    if isinstance(state, StateVector):
        return "PURE", state.layout.n_qubits, state.amplitudes
    n = state.dim.bit_length() - 1
    if 1 << n != state.dim:
        raise FormatError(f"matrix dim {state.dim} is not a power of two")
    return "MIXED", n, state.entries.reshape(-1)


def write_state_text(stream: TextIO, state: State) -> None:
    kind, n, values = _header_fields(state)
    stream.write(f"QSTATE 1 {kind} {n}\n")
    for v in values:
        stream.write(f"{v.real:.17g} {v.imag:.17g}\n")


def write_state_binary(stream: BinaryIO, state: State) -> None:
    kind, n, values = _header_fields(state)
    kind_byte = _KIND_PURE if kind == "PURE" else _KIND_MIXED
    stream.write(MAGIC + struct.pack("<BBBB", kind_byte, n, 0, 0))
    stream.write(np.ascontiguousarray(values, dtype="<c16").tobytes())


def write_state_file(path: Union[str, Path], state: State, fmt: str = "text") -> None:
    """Serialize to text (default) or binary."""
    if fmt == "text":
        with open(path, "w", encoding="utf-8") as fh:
            write_state_text(fh, state)
    elif fmt == "binary":
        with open(path, "wb") as fh:
            write_state_binary(fh, state)
    else:
        raise ValueError(f"unknown format {fmt!r}")
