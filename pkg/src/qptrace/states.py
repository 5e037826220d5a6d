"""Seeded state generators for tests, verification, and benchmarks."""

from __future__ import annotations

import numpy as np

from .model import DensityMatrix, QubitLayout, StateVector

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def random_pure(n_qubits: int, seed: int) -> StateVector:
    """Normalized complex-Gaussian state vector."""
    rng = np.random.default_rng(seed)
    dim = 1 << n_qubits
    # One draw viewed as (re, im) pairs; avoids a second 2^N-sized temp.
    amps = rng.standard_normal(2 * dim).view(np.complex128)
    amps /= np.linalg.norm(amps)
    return StateVector(QubitLayout(n_qubits), amps)


def random_mixed(n_qubits: int, seed: int) -> DensityMatrix:
    """Trace-normalized A @ A.conj().T from a seeded complex-Gaussian A;
    Hermitian and positive semidefinite by construction."""
    rng = np.random.default_rng(seed)
    dim = 1 << n_qubits
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix(rho)


def singlet() -> StateVector:
    """(|01> - |10>)/sqrt(2)."""
    amps = np.zeros(4, dtype=np.complex128)
    amps[0b01] = INV_SQRT2
    amps[0b10] = -INV_SQRT2
    return StateVector(QubitLayout(2), amps)


def singlet_product() -> StateVector:
    """Two singlet pairs side by side: pair on positions {4,3}, pair on {2,1}.

    Amplitudes +1/2 at indices 5 and 10, -1/2 at 6 and 9.
    """
    pair = singlet().amplitudes
    return StateVector(QubitLayout(4), np.kron(pair, pair))


def ghz(n_qubits: int) -> StateVector:
    """(|0...0> + |1...1>)/sqrt(2)."""
    dim = 1 << n_qubits
    amps = np.zeros(dim, dtype=np.complex128)
    amps[0] = INV_SQRT2
    amps[dim - 1] = INV_SQRT2
    return StateVector(QubitLayout(n_qubits), amps)


def w_state(n_qubits: int) -> StateVector:
    """Equal superposition of the single-excitation basis states."""
    dim = 1 << n_qubits
    amps = np.zeros(dim, dtype=np.complex128)
    amps[[1 << k for k in range(n_qubits)]] = 1.0 / np.sqrt(n_qubits)
    return StateVector(QubitLayout(n_qubits), amps)


def neel(n_qubits: int) -> StateVector:
    """Alternating basis state |...0101>: odd positions 1, even positions 0."""
    index = 0
    for p in range(1, n_qubits + 1, 2):
        index |= 1 << (p - 1)
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(QubitLayout(n_qubits), amps)


#: Named pure-state generators for the CLI; "random" also has a mixed form.
NAMED_STATES = {
    "random": random_pure,
    "ghz": lambda n, seed=0: ghz(n),
    "w": lambda n, seed=0: w_state(n),
    "neel": lambda n, seed=0: neel(n),
}


def make_pure_state(name: str, n_qubits: int, seed: int) -> StateVector:
    try:
        gen = NAMED_STATES[name]
    except KeyError:
        raise ValueError(f"unknown state {name!r}") from None
    return gen(n_qubits, seed) if name == "random" else gen(n_qubits)
