"""Benchmark harness: timed kernel runs with checksums and memory figures.

State generation is timed separately from tracing. When memory
measurement is on, one extra untimed pass runs under tracemalloc to
estimate the peak allocation of the traced call alone. Checksums
(sum of entry magnitudes, 12 significant digits) are method-invariant,
so a run can be cross-checked against any other method's run.
"""

from __future__ import annotations

import time
import tracemalloc
from dataclasses import dataclass

import numpy as np

from . import backend as _backend
from .errors import CostGuardExceeded
from .kernels import SEQUENTIAL_WORKFLOW, MethodId, trace_with_method
from .model import DensityMatrix, QubitLayout, ReducedDensityMatrix, StateVector, make_trace_spec
from .states import make_pure_state, random_mixed

#: Practical cap for benches that materialize a 4^N matrix.
MIXED_BENCH_MAX_QUBITS = 14

METHOD_CHOICES = (
    "auto",
    "powerset",
    "bipartite",
    "multistep",
    "naive",
    "oracle",
    SEQUENTIAL_WORKFLOW,
)


@dataclass(frozen=True)
class BenchReport:
    """One timed kernel run."""

    method: str
    backend: str
    n: int
    m: int
    positions: tuple[int, ...]
    state_seconds: float
    seconds: float
    checksum: str
    peak_mem_bytes: int | None

    def tsv(self) -> str:
        mem = "-" if self.peak_mem_bytes is None else str(self.peak_mem_bytes)
        return "\t".join(
            [
                self.method,
                self.backend,
                str(self.n),
                str(self.m),
                ",".join(map(str, self.positions)),
                f"{self.state_seconds:.6f}",
                f"{self.seconds:.6f}",
                self.checksum,
                mem,
            ]
        )

    def json_obj(self) -> dict:
        # The json-lines wire contract carries exactly these six keys.
        return {
            "method": self.method,
            "n": self.n,
            "m": self.m,
            "positions": list(self.positions),
            "seconds": self.seconds,
            "checksum": self.checksum,
        }


TSV_HEADER = "# method\tbackend\tn\tm\tpositions\tstate_s\tseconds\tchecksum\tpeak_mem_bytes"


def output_checksum(result: ReducedDensityMatrix) -> str:
    return f"{float(np.sum(np.abs(result.matrix.entries))):.12g}"


def resolve_bench_method(method: str, kind: str):
    """Map a CLI method name to a kernel id or the sequential pipeline."""
    if method == SEQUENTIAL_WORKFLOW:
        return SEQUENTIAL_WORKFLOW
    if method in ("auto", "powerset"):
        return MethodId.POWERSET_PURE if kind == "pure" else MethodId.POWERSET_MIXED
    return MethodId(
        {
            "bipartite": "bipartite",
            "multistep": "multistep",
            "naive": "naive",
            "oracle": "oracle",
        }[method]
    )


def _needs_full_matrix(method, kind: str) -> bool:
    return kind == "mixed" or method not in (MethodId.POWERSET_PURE,)


def run_bench(
    n: int,
    positions: list[int],
    method: str = "auto",
    kind: str = "pure",
    state_name: str = "random",
    reps: int = 1,
    seed: int = 0,
    backend: str | None = None,
    force: bool = False,
    measure_memory: bool = True,
) -> list[BenchReport]:
    """Run one method `reps` times on a freshly generated state."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    resolved = resolve_bench_method(method, kind)
    if _needs_full_matrix(resolved, kind) and n > MIXED_BENCH_MAX_QUBITS and not force:
        raise CostGuardExceeded(
            f"a 4^{n} matrix is needed; beyond N={MIXED_BENCH_MAX_QUBITS} "
            "pass --force if you really want this"
        )

    t0 = time.perf_counter()
    state: StateVector | DensityMatrix
    if kind == "mixed":
        if state_name == "random":
            state = random_mixed(n, seed)
        else:
            psi = make_pure_state(state_name, n, seed)
            state = DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()))
    else:
        state = make_pure_state(state_name, n, seed)
    state_seconds = time.perf_counter() - t0

    spec = make_trace_spec(QubitLayout(n), positions)
    backend_name = _backend.resolve(backend)
    oracle_cap = max(n, 12) if force else 12

    def run_once() -> ReducedDensityMatrix:
        return trace_with_method(
            state, spec, resolved, backend=backend_name, oracle_cap=oracle_cap
        )

    peak = None
    if measure_memory:
        tracemalloc.start()
        tracemalloc.reset_peak()
        run_once()
        peak = tracemalloc.get_traced_memory()[1]
        tracemalloc.stop()

    method_label = resolved if isinstance(resolved, str) else resolved.value
    reports = []
    for _ in range(reps):
        t0 = time.perf_counter()
        result = run_once()
        dt = time.perf_counter() - t0
        reports.append(
            BenchReport(
                method=method_label,
                backend=backend_name,
                n=n,
                m=spec.n_traced,
                positions=spec.traced_positions,
                state_seconds=state_seconds,
                seconds=dt,
                checksum=output_checksum(result),
                peak_mem_bytes=peak,
            )
        )
    return reports
