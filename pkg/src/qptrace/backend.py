"""Selection between the compiled extension and the numpy fallback.

The compiled module is preferred when importable. Override with the
environment variable QPTRACE_BACKEND=python|compiled, or at runtime via
set_backend / use_backend. Kernel results agree across backends up to
floating-point summation order; integer index streams are identical.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import _pykernels

try:
    from . import _ptkernels
except ImportError:  # extension not built; numpy fallback only
    _ptkernels = None

COMPILED = "compiled"
PYTHON = "python"

_env = os.environ.get("QPTRACE_BACKEND")
if _env not in (None, "", COMPILED, PYTHON):
    raise ImportError(f"QPTRACE_BACKEND must be 'compiled' or 'python', got {_env!r}")
if _env == COMPILED and _ptkernels is None:
    raise ImportError("QPTRACE_BACKEND=compiled but the extension is not built")

_active = PYTHON if _env == PYTHON or _ptkernels is None else COMPILED


def has_compiled() -> bool:
    return _ptkernels is not None


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in (COMPILED, PYTHON):
        raise ValueError(f"unknown backend {name!r}")
    if name == COMPILED and _ptkernels is None:
        raise ValueError("compiled backend requested but the extension is not built")
    _active = name


def resolve(name: str | None = None) -> str:
    """Map None/'auto' to the active backend, validate explicit names."""
    if name is None or name == "auto":
        return _active
    if name not in (COMPILED, PYTHON):
        raise ValueError(f"unknown backend {name!r}")
    if name == COMPILED and _ptkernels is None:
        raise ValueError("compiled backend requested but the extension is not built")
    return name


@contextmanager
def use_backend(name: str):
    """Temporarily switch the active backend (tests, benchmarks)."""
    global _active
    prev = _active
    set_backend(name)
    try:
        yield
    finally:
        _active = prev


def kernel_module(name: str | None = None):
    """The module implementing the hot kernels for the given backend."""
    return _ptkernels if resolve(name) == COMPILED else _pykernels
