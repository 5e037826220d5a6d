"""Matrix-allocation instrumentation.

Every DensityMatrix construction reports itself here. With a recorder
active, tests can assert how many matrix objects an operation created;
the direct kernels create exactly one (the output), the sequential
pipeline one per stage. Recording is off by default and costs a single
ContextVar lookup per construction.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field

_recorder: ContextVar["AllocationRecord | None"] = ContextVar(
    "qptrace_alloc_recorder", default=None
)


@dataclass
class AllocationRecord:
    """Dimensions of matrices allocated while the recorder was active."""

    dims: list[int] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.dims)


def note_matrix_allocation(dim: int) -> None:
    rec = _recorder.get()
    if rec is not None:
        rec.dims.append(dim)


@contextmanager
def record_matrix_allocations():
    """Context manager yielding an AllocationRecord of matrix constructions."""
    rec = AllocationRecord()
    token = _recorder.set(rec)
    try:
        yield rec
    finally:
        _recorder.reset(token)
