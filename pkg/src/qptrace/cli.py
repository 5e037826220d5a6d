"""Command-line front end: trace, verify, bench.

Exit codes: 0 success, 1 verification disagreement, 2 invalid usage,
3 file errors, 4 validation failure under --strict.

Positions on the command line are 1-based; position 1 is the least
significant bit of a basis index (the rightmost ket symbol).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import backend as _backend
from .bench import METHOD_CHOICES, TSV_HEADER, run_bench
from .errors import (
    FormatError,
    InvalidValue,
    QptraceError,
    TruncatedFile,
    ValidationFailed,
)
from .indexing import element_index_pairs
from .kernels import (
    SEQUENTIAL_WORKFLOW,
    MethodId,
    applicable_methods,
    powerset_trace_mixed,
    powerset_trace_pure,
    trace_with_method,
)
from .model import (
    DEFAULT_TOLERANCES,
    DensityMatrix,
    QubitLayout,
    StateVector,
    Tolerances,
    density_from_pure,
    full_trace,
    make_trace_spec,
    validate_density,
)
from .states import random_mixed, random_pure
from .stateio import parse_state_file, write_state_binary, write_state_file, write_state_text

AGREEMENT_TOL = 1e-12

#: verify needs full matrices; past this the 4^N footprint is impractical.
VERIFY_MAX_QUBITS = 14


def _parse_positions(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise ValueError(f"positions must be comma-separated integers, got {text!r}")


def _state_qubits(state) -> int:
    if isinstance(state, StateVector):
        return state.layout.n_qubits
    n = state.dim.bit_length() - 1
    if 1 << n != state.dim:
        raise FormatError(f"matrix dim {state.dim} is not a power of two")
    return n


def _cmd_trace(args) -> int:
    tol = (
        Tolerances(args.tol, args.tol, args.tol)
        if args.tol is not None
        else DEFAULT_TOLERANCES
    )
    state = parse_state_file(args.infile, strict=args.strict, tolerances=tol)

    if args.scalar:
        if isinstance(state, StateVector):
            value = complex(np.vdot(state.amplitudes, state.amplitudes))
        else:
            value = full_trace(state)
        print(f"{value.real:.17g} {value.imag:.17g}")
        return 0

    if args.trace is None:
        print("error: --trace is required (or use --scalar)", file=sys.stderr)
        return 2
    positions = _parse_positions(args.trace)
    n = _state_qubits(state)
    if len(positions) == n and len(set(positions)) == n:
        print(
            "error: tracing every qubit leaves a scalar, not a matrix; "
            "rerun with --scalar for the total trace",
            file=sys.stderr,
        )
        return 2
    spec = make_trace_spec(QubitLayout(n), positions)

    if args.method in ("auto", "powerset"):
        method = (
            MethodId.POWERSET_PURE
            if isinstance(state, StateVector)
            else MethodId.POWERSET_MIXED
        )
    else:
        method = MethodId(args.method)
    result = trace_with_method(state, spec, method, backend=args.backend)

    if args.strict:
        report = validate_density(result.matrix, tol)
        if not report.ok(tol):
            print(f"error: output failed validation: {report}", file=sys.stderr)
            return 4

    if args.out == "-":
        if args.format == "binary":
            write_state_binary(sys.stdout.buffer, result.matrix)
            sys.stdout.buffer.flush()
        else:
            write_state_text(sys.stdout, result.matrix)
    else:
        write_state_file(args.out, result.matrix, args.format)
    return 0


def _cmd_verify(args) -> int:
    n = args.n
    if n < 2:
        print("error: --n must be at least 2 (no proper subsystem)", file=sys.stderr)
        return 2
    if n > VERIFY_MAX_QUBITS:
        print(
            f"error: verify builds 4^N matrices; --n capped at {VERIFY_MAX_QUBITS}",
            file=sys.stderr,
        )
        return 2
    if args.trials < 1:
        print("error: --trials must be positive", file=sys.stderr)
        return 2
    fixed = _parse_positions(args.positions) if args.positions else None
    if fixed is not None and not 0 < len(fixed) < n:
        print("error: --positions must name a proper nonempty subset", file=sys.stderr)
        return 2

    layout = QubitLayout(n)
    worst = 0.0
    worst_info = None
    for trial in range(args.trials):
        rng = np.random.default_rng([args.seed, trial])
        if fixed is not None:
            positions = fixed
        else:
            m = int(rng.integers(1, n))
            positions = sorted(
                int(p) for p in rng.choice(np.arange(1, n + 1), size=m, replace=False)
            )
        spec = make_trace_spec(layout, positions)
        mixed_seed = int(rng.integers(0, 2**31))
        pure_seed = int(rng.integers(0, 2**31))
        rho = random_mixed(n, mixed_seed)
        psi = random_pure(n, pure_seed)

        outputs: dict[str, np.ndarray] = {}
        for mid in applicable_methods(spec, pure_input=False):
            outputs[mid.value] = trace_with_method(
                rho, spec, mid, backend=args.backend
            ).matrix.entries
        outputs[SEQUENTIAL_WORKFLOW] = trace_with_method(
            rho, spec, SEQUENTIAL_WORKFLOW
        ).matrix.entries
        reference = outputs[MethodId.POWERSET_MIXED.value]
        for name, arr in outputs.items():
            diff = np.abs(arr - reference)
            local = float(diff.max())
            if local > worst:
                flat = int(diff.argmax())
                worst = local
                worst_info = (trial, mixed_seed, positions, name, divmod(flat, arr.shape[0]))

        pure_out = powerset_trace_pure(psi, spec, backend=args.backend).matrix.entries
        pure_ref = powerset_trace_mixed(
            density_from_pure(psi), spec, backend=args.backend
        ).matrix.entries
        diff = np.abs(pure_out - pure_ref)
        local = float(diff.max())
        if local > worst:
            flat = int(diff.argmax())
            worst = local
            worst_info = (
                trial,
                pure_seed,
                positions,
                "powerset-pure vs powerset-mixed",
                divmod(flat, pure_out.shape[0]),
            )

        if args.verbose:
            print(
                f"trial {trial}: positions {positions}, methods "
                f"{sorted(outputs)}, max diff so far {worst:.3e}"
            )
            dprime = spec.reduced_dim
            l, m_el = min(2, dprime - 1), min(1, dprime - 1)
            pairs = element_index_pairs(spec, l, m_el)
            print(f"  element ({l},{m_el}) sums full-matrix entries: "
                  + " ".join(f"({r},{c})" for r, c in pairs))

    print(f"max elementwise disagreement over {args.trials} trial(s): {worst:.3e}")
    if worst > AGREEMENT_TOL:
        trial, seed, positions, name, element = worst_info
        print(
            f"FAIL: trial {trial} (state seed {seed}), positions {positions}, "
            f"{name}, element {element}: disagreement {worst:.3e} > {AGREEMENT_TOL}",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_bench(args) -> int:
    if args.reps < 1:
        print("error: --reps must be positive", file=sys.stderr)
        return 2
    if args.positions is not None:
        positions = _parse_positions(args.positions)
    elif args.trace_count is not None:
        if not 0 <= args.trace_count < args.n:
            print("error: --trace-count must satisfy 0 <= M < N", file=sys.stderr)
            return 2
        rng = np.random.default_rng(args.seed)
        positions = sorted(
            int(p)
            for p in rng.choice(
                np.arange(1, args.n + 1), size=args.trace_count, replace=False
            )
        )
    else:
        print("error: give --positions or --trace-count", file=sys.stderr)
        return 2

    reports = run_bench(
        n=args.n,
        positions=positions,
        method=args.method,
        kind=args.kind,
        state_name=args.state,
        reps=args.reps,
        seed=args.seed,
        backend=args.backend,
        force=args.force,
        measure_memory=not args.no_mem,
    )
    if args.json_lines:
        for rep in reports:
            print(json.dumps(rep.json_obj()))
    else:
        print(TSV_HEADER)
        if args.parallel:
            print("# note: kernels in this build are serial; --parallel is a no-op")
        for rep in reports:
            print(rep.tsv())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qptrace",
        description="Partial traces of multi-qubit states over arbitrary position sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_trace = sub.add_parser("trace", help="reduce a state file over given positions")
    p_trace.add_argument("--in", dest="infile", required=True, help="input state file")
    p_trace.add_argument("--trace", help="comma-separated 1-based positions to trace out")
    p_trace.add_argument(
        "--method",
        default="auto",
        choices=["auto", "powerset", "bipartite", "multistep", "naive", "oracle"],
    )
    p_trace.add_argument("--out", default="-", help="output path, or - for stdout")
    p_trace.add_argument("--format", default="text", choices=["text", "binary"])
    p_trace.add_argument("--tol", type=float, default=None, help="validation tolerance")
    p_trace.add_argument("--strict", action="store_true",
                         help="fail (exit 4) instead of warning on validation defects")
    p_trace.add_argument("--scalar", action="store_true",
                         help="print the total trace of the input and exit")
    p_trace.add_argument("--backend", default="auto",
                         choices=["auto", "compiled", "python"])
    p_trace.set_defaults(func=_cmd_trace)

    p_verify = sub.add_parser("verify", help="cross-check all methods on random states")
    p_verify.add_argument("--n", type=int, required=True)
    p_verify.add_argument("--trials", type=int, default=10)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--positions", help="fix the traced positions instead of sampling")
    p_verify.add_argument("--verbose", action="store_true")
    p_verify.add_argument("--backend", default="auto",
                          choices=["auto", "compiled", "python"])
    p_verify.set_defaults(func=_cmd_verify)

    p_bench = sub.add_parser("bench", help="time kernels and report checksums")
    p_bench.add_argument("--n", type=int, required=True)
    p_bench.add_argument("--trace-count", type=int, default=None)
    p_bench.add_argument("--positions", default=None)
    p_bench.add_argument("--method", default="auto", choices=list(METHOD_CHOICES))
    p_bench.add_argument("--kind", default="pure", choices=["pure", "mixed"])
    p_bench.add_argument("--state", default="random",
                         choices=["random", "ghz", "w", "neel"])
    p_bench.add_argument("--reps", type=int, default=1)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--json-lines", action="store_true")
    p_bench.add_argument("--force", action="store_true",
                         help="override the mixed-state and oracle size guards")
    p_bench.add_argument("--parallel", action="store_true",
                         help="allow parallel execution (kernels are serial; no-op)")
    p_bench.add_argument("--no-mem", action="store_true",
                         help="skip the tracemalloc instrumentation pass")
    p_bench.add_argument("--backend", default="auto",
                         choices=["auto", "compiled", "python"])
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (FormatError, TruncatedFile, InvalidValue, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (QptraceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
