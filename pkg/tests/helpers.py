"""Shared construction helpers for the test suite."""

import numpy as np

from realclock_qm import DensityMatrix, HermitianOperator


def random_hermitian(rng, dim, norm=1.0):
    """Random Hermitian matrix rescaled to the given spectral norm."""
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = 0.5 * (raw + raw.conj().T)
    h *= norm / np.max(np.abs(np.linalg.eigvalsh(h)))
    return HermitianOperator(h)


def random_density(rng, dim):
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = raw @ raw.conj().T
    return DensityMatrix(rho / np.real(np.trace(rho)))


def random_pure(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return DensityMatrix.from_pure(v)


def qubit_hamiltonian(omega):
    return HermitianOperator(np.diag([0.0, omega]))


def plus_state():
    return DensityMatrix(np.full((2, 2), 0.5))


PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
