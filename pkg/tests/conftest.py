import pytest

from qptrace import backend as backend_mod

BACKENDS = ("compiled", "python") if backend_mod.has_compiled() else ("python",)


@pytest.fixture(params=BACKENDS)
def backend(request):
    """Run a test against every built kernel backend."""
    return request.param
