"""Partial traces of multi-qubit quantum states by index arithmetic.

Any subset of qubit positions can be traced out in one pass; pure
states are reduced directly from their amplitude vector without ever
forming the full density matrix. Position 1 is the least significant
bit of a basis index (see model.QubitLayout).

Hot kernels run in a compiled extension when built, with a numpy
fallback selected automatically at import (see qptrace.backend).
"""

from .backend import active_backend, has_compiled, set_backend, use_backend
from .errors import (
    CostGuardExceeded,
    DimensionMismatch,
    DuplicatePosition,
    FormatError,
    FullTraceNotASpec,
    IndexOutOfRange,
    InvalidSpectrum,
    InvalidValue,
    LayoutMismatch,
    NotHermitian,
    PositionOutOfRange,
    QptraceError,
    TruncatedFile,
    ValidationFailed,
)
from .indexing import IndexEmbedding, element_index_pairs, enumerate_eta, iter_submasks
from .kernels import (
    SEQUENTIAL_WORKFLOW,
    MethodId,
    applicable_methods,
    bipartite_index_trace_a,
    bipartite_index_trace_b,
    brute_force_oracle,
    multipartite_step_trace_middle,
    naive_projector_trace_b,
    powerset_trace_mixed,
    powerset_trace_pure,
    renumber_positions,
    sequential_workflow_trace,
    trace_composed,
    trace_with_method,
)
from .measures import (
    Spectrum,
    block_entropy,
    hermitian_eigensystem,
    hermitian_eigenvalues,
    purity,
    von_neumann_entropy,
)
from .model import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    QubitLayout,
    ReducedDensityMatrix,
    StateVector,
    Tolerances,
    TraceSpec,
    ValidationReport,
    density_from_pure,
    full_trace,
    make_trace_spec,
    validate_density,
)
from .stateio import parse_state_file, write_state_file

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # backend
    "active_backend",
    "has_compiled",
    "set_backend",
    "use_backend",
    # model
    "QubitLayout",
    "StateVector",
    "DensityMatrix",
    "TraceSpec",
    "ReducedDensityMatrix",
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "ValidationReport",
    "make_trace_spec",
    "full_trace",
    "validate_density",
    "density_from_pure",
    # indexing
    "IndexEmbedding",
    "enumerate_eta",
    "element_index_pairs",
    "iter_submasks",
    # kernels
    "MethodId",
    "SEQUENTIAL_WORKFLOW",
    "naive_projector_trace_b",
    "bipartite_index_trace_b",
    "bipartite_index_trace_a",
    "multipartite_step_trace_middle",
    "powerset_trace_mixed",
    "powerset_trace_pure",
    "brute_force_oracle",
    "sequential_workflow_trace",
    "trace_with_method",
    "trace_composed",
    "applicable_methods",
    "renumber_positions",
    # measures
    "Spectrum",
    "purity",
    "hermitian_eigensystem",
    "hermitian_eigenvalues",
    "von_neumann_entropy",
    "block_entropy",
    # io
    "parse_state_file",
    "write_state_file",
    # errors
    "QptraceError",
    "DuplicatePosition",
    "PositionOutOfRange",
    "FullTraceNotASpec",
    "IndexOutOfRange",
    "DimensionMismatch",
    "LayoutMismatch",
    "CostGuardExceeded",
    "NotHermitian",
    "InvalidSpectrum",
    "ValidationFailed",
    "FormatError",
    "TruncatedFile",
    "InvalidValue",
]
