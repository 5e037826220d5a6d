import subprocess
import sys

import numpy as np
import pytest

from qptrace import (
    QubitLayout,
    active_backend,
    backend,
    has_compiled,
    make_trace_spec,
    powerset_trace_mixed,
    powerset_trace_pure,
    set_backend,
    use_backend,
)
from qptrace.states import random_mixed, random_pure

needs_compiled = pytest.mark.skipif(
    not has_compiled(), reason="compiled extension not built"
)


def test_active_backend_is_valid():
    assert active_backend() in ("compiled", "python")


def test_set_backend_validates():
    with pytest.raises(ValueError):
        set_backend("fortran")


def test_use_backend_restores():
    before = active_backend()
    with use_backend("python"):
        assert active_backend() == "python"
    assert active_backend() == before


def test_resolve_auto():
    assert backend.resolve(None) == active_backend()
    assert backend.resolve("auto") == active_backend()
    assert backend.resolve("python") == "python"


@needs_compiled
def test_env_var_forces_python_backend():
    code = (
        "import qptrace; import sys; "
        "sys.exit(0 if qptrace.active_backend() == 'python' else 1)"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code],
        env={"QPTRACE_BACKEND": "python", "PATH": "/usr/bin:/bin"},
    )
    assert proc.returncode == 0


@needs_compiled
def test_backends_agree_on_random_inputs():
    rng = np.random.default_rng(31)
    worst = 0.0
    for trial in range(15):
        n = int(rng.integers(2, 10))
        m = int(rng.integers(1, n))
        positions = sorted(
            int(p) for p in rng.choice(np.arange(1, n + 1), size=m, replace=False)
        )
        spec = make_trace_spec(QubitLayout(n), positions)
        psi = random_pure(n, 700 + trial)
        rho = random_mixed(min(n, 7), 800 + trial)
        spec_mixed = make_trace_spec(
            QubitLayout(min(n, 7)), [p for p in positions if p <= min(n, 7)] or [1]
        )
        for hermitian in (True, False):
            a = powerset_trace_pure(psi, spec, hermitian=hermitian, backend="compiled")
            b = powerset_trace_pure(psi, spec, hermitian=hermitian, backend="python")
            worst = max(worst, float(np.max(np.abs(a.matrix.entries - b.matrix.entries))))
            c = powerset_trace_mixed(rho, spec_mixed, hermitian=hermitian, backend="compiled")
            d = powerset_trace_mixed(rho, spec_mixed, hermitian=hermitian, backend="python")
            worst = max(worst, float(np.max(np.abs(c.matrix.entries - d.matrix.entries))))
    assert worst <= 1e-13
