import math

import numpy as np
import pytest

from qptrace import (
    CostGuardExceeded,
    DensityMatrix,
    InvalidSpectrum,
    NotHermitian,
    QubitLayout,
    block_entropy,
    density_from_pure,
    hermitian_eigensystem,
    hermitian_eigenvalues,
    make_trace_spec,
    powerset_trace_mixed,
    powerset_trace_pure,
    purity,
    von_neumann_entropy,
)
from qptrace.states import random_pure, singlet_product

HALF_IDENTITY = np.eye(2) / 2


def random_density(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


class TestPurity:
    def test_maximally_mixed_qubit(self):
        assert purity(DensityMatrix(HALF_IDENTITY)) == pytest.approx(0.5)

    def test_projector(self):
        rng = np.random.default_rng(1)
        v = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        v /= np.linalg.norm(v)
        assert purity(DensityMatrix(np.outer(v, v.conj()))) == pytest.approx(1.0)

    def test_reduced_singlet_product(self):
        spec = make_trace_spec(QubitLayout(4), [1, 2, 3])
        out = powerset_trace_pure(singlet_product(), spec)
        assert purity(out.matrix) == pytest.approx(0.5)


class TestEigensolver:
    def test_diagonal(self, backend):
        spectrum = hermitian_eigenvalues(DensityMatrix(HALF_IDENTITY), backend=backend)
        np.testing.assert_allclose(spectrum.eigenvalues, [0.5, 0.5])

    def test_rank_one_plus_projector(self, backend):
        mat = np.array([[0, 1], [1, 0]]) / 2 + np.eye(2) / 2
        spectrum = hermitian_eigenvalues(
            DensityMatrix(mat.astype(complex)), backend=backend
        )
        np.testing.assert_allclose(spectrum.eigenvalues, [1.0, 0.0], atol=1e-14)

    def test_two_by_two_characteristic_roots(self, backend):
        # analytic roots of x^2 - tr*x + det for a random Hermitian 2x2
        rng = np.random.default_rng(2)
        mat = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        mat = (mat + mat.conj().T) / 2
        tr = np.trace(mat).real
        det = np.linalg.det(mat).real
        disc = math.sqrt(tr * tr - 4 * det)
        expected = sorted([(tr + disc) / 2, (tr - disc) / 2], reverse=True)
        got = hermitian_eigenvalues(
            DensityMatrix(mat, normalized=False), backend=backend
        )
        np.testing.assert_allclose(got.eigenvalues, expected, atol=1e-12)

    def test_random_matrix_against_reference(self, backend):
        rng = np.random.default_rng(3)
        mat = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        mat = (mat + mat.conj().T) / 2
        got = hermitian_eigenvalues(DensityMatrix(mat, normalized=False), backend=backend)
        expected = np.linalg.eigvalsh(mat)[::-1]
        np.testing.assert_allclose(got.eigenvalues, expected, atol=1e-8)

    def test_residuals(self, backend):
        for dim, seed in [(4, 4), (16, 5), (40, 6)]:
            rho = random_density(dim, seed)
            w, v = hermitian_eigensystem(rho, backend=backend)
            norm = np.linalg.norm(rho.entries)
            for k in range(dim):
                resid = np.linalg.norm(rho.entries @ v[:, k] - w[k] * v[:, k])
                assert resid <= 1e-8 * norm

    def test_descending_order(self, backend):
        rho = random_density(12, 7)
        w = hermitian_eigenvalues(rho, backend=backend).eigenvalues
        assert np.all(np.diff(w) <= 0)
        assert np.sum(w) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_hermitian(self):
        mat = np.zeros((2, 2), dtype=complex)
        mat[0, 1] = 1.0
        with pytest.raises(NotHermitian):
            hermitian_eigenvalues(DensityMatrix(mat, normalized=False))

    def test_dimension_guard(self, monkeypatch):
        from qptrace import measures

        monkeypatch.setattr(measures, "EIGENSOLVE_MAX_DIM", 8)
        with pytest.raises(CostGuardExceeded):
            hermitian_eigenvalues(random_density(16, 12))


class TestEntropy:
    def test_maximally_mixed_qubit_is_one_bit(self):
        assert von_neumann_entropy(DensityMatrix(HALF_IDENTITY)) == pytest.approx(1.0)

    def test_pure_projector_is_zero(self):
        rho = density_from_pure(singlet_product())
        assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-10)

    def test_reduction_of_singlet_product(self):
        spec = make_trace_spec(QubitLayout(4), [1, 2, 3])
        out = powerset_trace_pure(singlet_product(), spec)
        assert von_neumann_entropy(out.matrix) == pytest.approx(1.0, abs=1e-12)

    def test_natural_log_base(self):
        s = von_neumann_entropy(DensityMatrix(HALF_IDENTITY), log_base=math.e)
        assert s == pytest.approx(math.log(2))

    def test_strongly_negative_eigenvalue_rejected(self):
        bad = DensityMatrix(np.diag([1.2, -0.2]).astype(complex))
        with pytest.raises(InvalidSpectrum):
            von_neumann_entropy(bad)

    def test_mild_negative_clamped(self):
        ok = DensityMatrix(np.diag([1.0 + 5e-11, -5e-11]).astype(complex))
        assert von_neumann_entropy(ok) == pytest.approx(0.0, abs=1e-9)


class TestBlockEntropy:
    def test_singlet_product_single_qubit_block(self):
        assert block_entropy(singlet_product(), [4]) == pytest.approx(1.0, abs=1e-10)

    def test_singlet_product_pair_block(self):
        # the {3,4} pair factorizes from {1,2}
        assert block_entropy(singlet_product(), [3, 4]) == pytest.approx(0.0, abs=1e-10)

    def test_product_state_any_block(self):
        rng = np.random.default_rng(8)
        factors = []
        for _ in range(4):
            v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            factors.append(v / np.linalg.norm(v))
        amps = factors[0]
        for f in factors[1:]:
            amps = np.kron(amps, f)
        from qptrace import StateVector

        psi = StateVector(QubitLayout(4), amps)
        for block in ([1], [2, 4], [1, 2, 3]):
            assert block_entropy(psi, block) == pytest.approx(0.0, abs=1e-10)

    def test_schmidt_symmetry_on_random_states(self):
        rng = np.random.default_rng(9)
        for trial in range(8):
            n = int(rng.integers(3, 9))
            k = int(rng.integers(1, n))
            block = sorted(
                int(p) for p in rng.choice(np.arange(1, n + 1), size=k, replace=False)
            )
            complement = [p for p in range(1, n + 1) if p not in block]
            psi = random_pure(n, 600 + trial)
            assert block_entropy(psi, block) == pytest.approx(
                block_entropy(psi, complement), abs=1e-8
            )

    def test_entropy_bounds(self):
        psi = random_pure(6, 10)
        for block in ([1], [2, 5], [1, 3, 6]):
            s = block_entropy(psi, block)
            assert -1e-10 <= s <= len(block)

    def test_block_validation(self):
        psi = singlet_product()
        with pytest.raises(Exception):
            block_entropy(psi, [])
        with pytest.raises(Exception):
            block_entropy(psi, [1, 2, 3, 4])
        with pytest.raises(Exception):
            block_entropy(psi, [5])


class TestConsistency:
    def test_purity_equals_sum_of_squared_eigenvalues(self):
        rho = random_density(16, 11)
        w = hermitian_eigenvalues(rho).eigenvalues
        assert purity(rho) == pytest.approx(float(np.sum(w**2)), abs=1e-8)

    def test_comb_pattern_entropy_same_through_both_kernels(self):
        # tracing the even positions of the four-qubit pair state
        psi = singlet_product()
        spec = make_trace_spec(QubitLayout(4), [2, 4])
        via_pure = powerset_trace_pure(psi, spec)
        via_mixed = powerset_trace_mixed(density_from_pure(psi), spec)
        s_pure = von_neumann_entropy(via_pure.matrix)
        s_mixed = von_neumann_entropy(via_mixed.matrix)
        assert s_pure == pytest.approx(s_mixed, abs=1e-12)
