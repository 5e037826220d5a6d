"""The partial-trace algorithms.

Four production methods plus a deliberately independent brute-force
oracle, all yielding identical reduced matrices on shared inputs:

* naive_projector_trace_b - literal basis-bra/ket sandwich with explicit
  matrix products; the slow baseline.
* bipartite_index_trace_b / _a - index-arithmetic trace of the fast- or
  slow-varying tensor factor; additions only.
* multipartite_step_trace_middle - index-arithmetic trace of a middle
  factor out of three.
* powerset_trace_mixed / powerset_trace_pure - the subset-offset method:
  any set of qubit positions in one pass, the pure variant never forming
  the full projector.
* brute_force_oracle - O(4^N) equality-filter scan, structured unlike
  the offset kernels so bugs cannot be shared.

sequential_workflow_trace chains the bipartite/middle kernels block by
block to reach arbitrary position sets the way one would without the
offset method; it exists to expose the intermediate-matrix cost in
benchmarks.

The three factor-index kernels accept arbitrary subsystem dimensions,
not just powers of two.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

import numpy as np

from . import backend as _backend
from .errors import CostGuardExceeded, DimensionMismatch, LayoutMismatch
from .indexing import IndexEmbedding, enumerate_eta
from .model import (
    DensityMatrix,
    QubitLayout,
    ReducedDensityMatrix,
    StateVector,
    TraceSpec,
    density_from_pure,
    make_trace_spec,
)

#: Default N cap for the O(4^N) oracle.
ORACLE_MAX_QUBITS = 12

#: Identifier recorded by sequential_workflow_trace (a pipeline, not a kernel).
SEQUENTIAL_WORKFLOW = "sequential"


class MethodId(Enum):
    """One id per registered kernel; comparisons iterate this enumeration."""

    NAIVE_PROJECTOR = "naive"
    BIPARTITE_INDEX = "bipartite"
    MULTIPARTITE_STEP = "multistep"
    POWERSET_MIXED = "powerset-mixed"
    POWERSET_PURE = "powerset-pure"
    BRUTE_FORCE_ORACLE = "oracle"


def _require_dim(rho: DensityMatrix, expected: int) -> None:
    if rho.dim != expected:
        raise DimensionMismatch(f"matrix dim {rho.dim}, subsystem product {expected}")


def naive_projector_trace_b(rho: DensityMatrix, dim_a: int, dim_b: int) -> DensityMatrix:
    """Trace the fast-varying factor by explicit operator sandwiching.

    For each basis label j of the traced factor, forms the selection
    operator (identity on the kept factor tensor bra j) by placing ones
    at computed positions, then accumulates the explicit triple product.
    Intentionally slow; kept as the baseline.
    """
    _require_dim(rho, dim_a * dim_b)
    out = np.zeros((dim_a, dim_a), dtype=np.complex128)
    sandwich = np.zeros((dim_a, dim_a * dim_b))
    rows = np.arange(dim_a)
    for j in range(dim_b):
        sandwich[:] = 0.0
        sandwich[rows, rows * dim_b + j] = 1.0
        out += sandwich @ rho.entries @ sandwich.T
    return DensityMatrix(out, normalized=rho.normalized)


def bipartite_index_trace_b(rho: DensityMatrix, dim_a: int, dim_b: int) -> DensityMatrix:
    """Trace the fast-varying factor: out[k,l] = sum_j rho[k*dim_b+j, l*dim_b+j]."""
    _require_dim(rho, dim_a * dim_b)
    folded = rho.entries.reshape(dim_a, dim_b, dim_a, dim_b)
    return DensityMatrix(np.trace(folded, axis1=1, axis2=3), normalized=rho.normalized)


def bipartite_index_trace_a(rho: DensityMatrix, dim_a: int, dim_b: int) -> DensityMatrix:
    """Trace the slow-varying factor: out[k,l] = sum_j rho[j*dim_b+k, j*dim_b+l]."""
    _require_dim(rho, dim_a * dim_b)
    folded = rho.entries.reshape(dim_a, dim_b, dim_a, dim_b)
    return DensityMatrix(np.trace(folded, axis1=0, axis2=2), normalized=rho.normalized)


def multipartite_step_trace_middle(
    rho: DensityMatrix, dim_a: int, dim_b: int, dim_c: int
) -> DensityMatrix:
    """Trace the middle factor of an A (x) B (x) C layout; additions only."""
    _require_dim(rho, dim_a * dim_b * dim_c)
    folded = rho.entries.reshape(dim_a, dim_b, dim_c, dim_a, dim_b, dim_c)
    kept = np.trace(folded, axis1=1, axis2=4)  # (a, c, a, c)
    dim_ac = dim_a * dim_c
    return DensityMatrix(
        np.ascontiguousarray(kept).reshape(dim_ac, dim_ac), normalized=rho.normalized
    )


def powerset_trace_mixed(
    rho: DensityMatrix,
    spec: TraceSpec,
    hermitian: bool = True,
    backend: str | None = None,
) -> ReducedDensityMatrix:
    """Reduce over any set of qubit positions in a single pass.

    Element (l, m) is the sum of rho over the 2^M offset pairs of
    element_index_pairs: 2^(2(N-M)) * 2^M additions, no multiplications.
    With hermitian set (default) only l >= m is computed and the upper
    triangle is the conjugate mirror; disable for non-Hermitian input
    or to exercise the full summation path.
    """
    _require_dim(rho, spec.layout.dim)
    bases = IndexEmbedding.from_spec(spec).scatter_all()
    if _backend.resolve(backend) == _backend.COMPILED:
        arr = _backend.kernel_module(backend).powerset_mixed(
            rho.entries, bases, spec.trace_mask, hermitian
        )
    else:
        arr = _backend.kernel_module(backend).powerset_mixed(
            rho.entries, bases, enumerate_eta(spec), hermitian
        )
    return ReducedDensityMatrix(
        DensityMatrix(arr, normalized=rho.normalized),
        MethodId.POWERSET_MIXED.value,
        spec,
    )


def powerset_trace_pure(
    psi: StateVector,
    spec: TraceSpec,
    hermitian: bool = True,
    backend: str | None = None,
) -> ReducedDensityMatrix:
    """Reduce a pure state without materializing its projector.

    Element (l, m) sums amplitude products psi[l'+off] * conj(psi[m'+off])
    over the 2^M offsets; the only matrix allocated is the output.
    """
    if psi.layout.n_qubits != spec.layout.n_qubits:
        raise LayoutMismatch(
            f"state has {psi.layout.n_qubits} qubits, spec {spec.layout.n_qubits}"
        )
    bases = IndexEmbedding.from_spec(spec).scatter_all()
    if _backend.resolve(backend) == _backend.COMPILED:
        arr = _backend.kernel_module(backend).powerset_pure(
            psi.amplitudes, bases, spec.trace_mask, hermitian
        )
    else:
        arr = _backend.kernel_module(backend).powerset_pure(
            psi.amplitudes, bases, enumerate_eta(spec), hermitian
        )
    return ReducedDensityMatrix(
        DensityMatrix(arr), MethodId.POWERSET_PURE.value, spec
    )


def brute_force_oracle(
    rho: DensityMatrix, spec: TraceSpec, max_qubits: int = ORACLE_MAX_QUBITS
) -> ReducedDensityMatrix:
    """O(4^N) verification path: scan all (i, j), keep pairs whose traced
    bits agree, accumulate into (gather(i), gather(j)).

    Structured as an equality filter on purpose, sharing nothing with
    the offset generation of the production kernels.
    """
    n = spec.layout.n_qubits
    if n > max_qubits:
        raise CostGuardExceeded(f"oracle is O(4^N); N={n} exceeds cap {max_qubits}")
    _require_dim(rho, spec.layout.dim)
    emb = IndexEmbedding.from_spec(spec)
    compact = emb.gather_all()
    traced_part = np.arange(spec.layout.dim, dtype=np.int64) & spec.trace_mask
    out = np.zeros((spec.reduced_dim, spec.reduced_dim), dtype=np.complex128)
    for i in range(spec.layout.dim):
        matches = np.nonzero(traced_part == traced_part[i])[0]
        out[compact[i], compact[matches]] += rho.entries[i, matches]
    return ReducedDensityMatrix(
        DensityMatrix(out, normalized=rho.normalized),
        MethodId.BRUTE_FORCE_ORACLE.value,
        spec,
    )


def renumber_positions(positions: Sequence[int], traced: Sequence[int]) -> list[int]:
    """Positions in the system left after tracing `traced` (canonical
    renumbering: survivors keep their relative order, renumbered 1..N-M)."""
    traced_sorted = sorted(traced)
    out = []
    for p in positions:
        if p in traced_sorted:
            raise ValueError(f"position {p} was traced away")
        out.append(p - sum(1 for t in traced_sorted if t < p))
    return out


def _leading_block(positions: list[int], n: int) -> tuple[int, int] | None:
    """(start, length) of the maximal traced run containing position 1."""
    if not positions or positions[0] != 1:
        return None
    length = 1
    while length < len(positions) and positions[length] == positions[length - 1] + 1:
        length += 1
    return 1, length


def _trailing_block(positions: list[int], n: int) -> tuple[int, int] | None:
    """(start, length) of the maximal traced run containing position n."""
    if not positions or positions[-1] != n:
        return None
    length = 1
    while (
        length < len(positions)
        and positions[-length - 1] == positions[-length] - 1
    ):
        length += 1
    return n - length + 1, length


def _first_interior_block(positions: list[int]) -> tuple[int, int]:
    """(start, length) of the lowest maximal traced run."""
    start = positions[0]
    length = 1
    while length < len(positions) and positions[length] == start + length:
        length += 1
    return start, length


def sequential_workflow_trace(
    state: DensityMatrix | StateVector, spec: TraceSpec
) -> ReducedDensityMatrix:
    """Reach an arbitrary position set by chaining the factor kernels.

    Pipeline: trace the contiguous low-position block (fast factor),
    then the contiguous high-position block (slow factor), then any
    interior blocks one by one (middle factor), renumbering surviving
    positions after each stage. Every stage materializes an
    intermediate matrix; a pure state is first expanded into its
    projector. Kept for benchmarking against the one-pass kernels, not
    for production use.
    """
    if isinstance(state, StateVector):
        if state.layout.n_qubits != spec.layout.n_qubits:
            raise LayoutMismatch(
                f"state has {state.layout.n_qubits} qubits, spec {spec.layout.n_qubits}"
            )
        rho = density_from_pure(state)
    else:
        rho = state
        _require_dim(rho, spec.layout.dim)

    n = spec.layout.n_qubits
    remaining = list(spec.traced_positions)
    while remaining:
        block = _leading_block(remaining, n)
        if block is not None:
            start, length = block
            rho = bipartite_index_trace_b(rho, 1 << (n - length), 1 << length)
        else:
            block = _trailing_block(remaining, n)
            if block is not None:
                start, length = block
                rho = bipartite_index_trace_a(rho, 1 << length, 1 << (n - length))
            else:
                start, length = _first_interior_block(remaining)
                dim_low = 1 << (start - 1)
                dim_mid = 1 << length
                dim_high = 1 << (n - (start + length - 1))
                rho = multipartite_step_trace_middle(rho, dim_high, dim_mid, dim_low)
        traced_now = list(range(start, start + length))
        remaining = renumber_positions(
            [p for p in remaining if p not in traced_now], traced_now
        )
        n -= length
    return ReducedDensityMatrix(rho, SEQUENTIAL_WORKFLOW, spec)


# ---------------------------------------------------------------------------
# Dispatch helpers shared by the CLI, verifier, and benchmark harness.


def _contiguous_run(spec: TraceSpec) -> tuple[int, int] | None:
    """(start, length) if the traced positions form one contiguous run."""
    pos = spec.traced_positions
    if not pos:
        return None
    if pos[-1] - pos[0] + 1 != len(pos):
        return None
    return pos[0], len(pos)


def applicable_methods(
    spec: TraceSpec, pure_input: bool, oracle_cap: int = ORACLE_MAX_QUBITS
) -> list[MethodId]:
    """Kernels able to handle this spec shape directly."""
    n = spec.layout.n_qubits
    methods = [MethodId.POWERSET_MIXED]
    if pure_input:
        methods.append(MethodId.POWERSET_PURE)
    if n <= oracle_cap:
        methods.append(MethodId.BRUTE_FORCE_ORACLE)
    run = _contiguous_run(spec)
    if run is not None:
        start, length = run
        if start == 1 or start + length - 1 == n:
            methods.append(MethodId.BIPARTITE_INDEX)
        if start == 1:
            methods.append(MethodId.NAIVE_PROJECTOR)
        methods.append(MethodId.MULTIPARTITE_STEP)
    return methods


def trace_with_method(
    state: DensityMatrix | StateVector,
    spec: TraceSpec,
    method: MethodId | str,
    hermitian: bool = True,
    backend: str | None = None,
    oracle_cap: int = ORACLE_MAX_QUBITS,
) -> ReducedDensityMatrix:
    """Run one method on a state, adapting specs to kernel signatures.

    Methods that need a full density matrix expand a pure input into
    its projector first. Structured kernels (naive/bipartite/multistep)
    require the traced positions to form a matching contiguous block
    and raise DimensionMismatch otherwise.
    """
    if isinstance(method, str) and method == SEQUENTIAL_WORKFLOW:
        return sequential_workflow_trace(state, spec)
    method = MethodId(method) if isinstance(method, str) else method

    if method == MethodId.POWERSET_PURE:
        if not isinstance(state, StateVector):
            raise DimensionMismatch("powerset-pure needs a state vector input")
        return powerset_trace_pure(state, spec, hermitian=hermitian, backend=backend)

    rho = density_from_pure(state) if isinstance(state, StateVector) else state
    if method == MethodId.POWERSET_MIXED:
        return powerset_trace_mixed(rho, spec, hermitian=hermitian, backend=backend)
    if method == MethodId.BRUTE_FORCE_ORACLE:
        return brute_force_oracle(rho, spec, max_qubits=oracle_cap)

    n = spec.layout.n_qubits
    run = _contiguous_run(spec)
    if run is None:
        raise DimensionMismatch(
            f"method {method.value} needs a contiguous traced block, got "
            f"{spec.traced_positions}"
        )
    start, length = run
    if method == MethodId.NAIVE_PROJECTOR:
        if start != 1:
            raise DimensionMismatch("naive kernel traces the low-position block only")
        out = naive_projector_trace_b(rho, 1 << (n - length), 1 << length)
    elif method == MethodId.BIPARTITE_INDEX:
        if start == 1:
            out = bipartite_index_trace_b(rho, 1 << (n - length), 1 << length)
        elif start + length - 1 == n:
            out = bipartite_index_trace_a(rho, 1 << length, 1 << (n - length))
        else:
            raise DimensionMismatch(
                "bipartite kernel traces a low or high contiguous block only"
            )
    elif method == MethodId.MULTIPARTITE_STEP:
        dim_low = 1 << (start - 1)
        dim_mid = 1 << length
        dim_high = 1 << (n - (start + length - 1))
        out = multipartite_step_trace_middle(rho, dim_high, dim_mid, dim_low)
    else:
        raise ValueError(f"unhandled method {method}")
    return ReducedDensityMatrix(out, method.value, spec)


def trace_composed(
    rho: DensityMatrix,
    layout: QubitLayout,
    first: Sequence[int],
    second: Sequence[int],
    backend: str | None = None,
) -> ReducedDensityMatrix:
    """Trace `first`, then `second` (given in original numbering), as two
    offset-kernel passes; equals the single pass over their union."""
    spec1 = make_trace_spec(layout, first)
    step1 = powerset_trace_mixed(rho, spec1, backend=backend)
    remaining_layout = QubitLayout(layout.n_qubits - spec1.n_traced)
    spec2 = make_trace_spec(remaining_layout, renumber_positions(second, first))
    return powerset_trace_mixed(step1.matrix, spec2, backend=backend)
