"""Dense complex linear algebra with physics invariants.

Domain types are thin, immutable wrappers around square complex numpy
arrays. Construction validates the physical invariants (Hermiticity,
unit trace, positivity, idempotence) so downstream code can assume them.
All quantities are dimensionless in natural units (hbar = c = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ValidationError

TOL_HERMITIAN = 1e-12
TOL_TRACE = 1e-10
TOL_PSD = 1e-9
TOL_IDEMPOTENT = 1e-10
TOL_DECOMPOSITION = 1e-10


def as_square_complex(entries, name: str = "matrix") -> np.ndarray:
    """Coerce to a read-only square complex array, validating the shape."""
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValidationError(f"{name} must have positive dimension")
    m.setflags(write=False)
    return m


def _worst_hermiticity_defect(m: np.ndarray) -> tuple[float, tuple[int, int]]:
    defect = np.abs(m - m.conj().T)
    idx = np.unravel_index(int(np.argmax(defect)), defect.shape)
    return float(defect[idx]), (int(idx[0]), int(idx[1]))


def _require_hermitian(m: np.ndarray, name: str, tol: float = TOL_HERMITIAN) -> None:
    worst, (i, j) = _worst_hermiticity_defect(m)
    if worst > tol:
        raise ValidationError(
            f"{name} is not Hermitian: entry ({i}, {j}) deviates from the "
            f"conjugate of ({j}, {i}) by {worst:.3e} (tol {tol:.1e})"
        )


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian matrix: Hamiltonians and observables."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_square_complex(self.matrix, "operator")
        _require_hermitian(m, "operator")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace state."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_square_complex(self.matrix, "density matrix")
        _require_hermitian(m, "density matrix")
        tr = np.trace(m)
        if abs(tr.imag) > TOL_TRACE or abs(tr.real - 1.0) > TOL_TRACE:
            raise ValidationError(
                f"density matrix trace must be 1, got {tr:.12g} (tol {TOL_TRACE:.1e})"
            )
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo < -TOL_PSD:
            raise ValidationError(
                f"density matrix has negative eigenvalue {lo:.3e} (tol {TOL_PSD:.1e})"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, amplitudes) -> "DensityMatrix":
        """Projector onto a (normalized) pure state vector."""
        v = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise ValidationError("pure state vector must be nonzero")
        v = v / norm
        return cls(np.outer(v, v.conj()))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector onto eigenvalues within an interval."""

    matrix: np.ndarray
    interval: tuple[float, float]  # (center, halfwidth)

    def __post_init__(self):
        m = as_square_complex(self.matrix, "projector")
        _require_hermitian(m, "projector")
        defect = float(np.max(np.abs(m @ m - m)))
        if defect > TOL_IDEMPOTENT:
            raise ValidationError(
                f"projector is not idempotent: max |P^2 - P| = {defect:.3e} "
                f"(tol {TOL_IDEMPOTENT:.1e})"
            )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "interval", (float(self.interval[0]), float(self.interval[1])))

    @property
    def rank(self) -> int:
        return int(round(float(np.real(np.trace(self.matrix)))))


@dataclass(frozen=True, eq=False)
class EnergyDecomposition:
    """Spectral decomposition of a Hamiltonian: H = V diag(omega) V^dagger."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        w = np.array(self.eigenvalues, dtype=float)
        v = as_square_complex(self.eigenvectors, "eigenvector matrix")
        if w.ndim != 1 or w.shape[0] != v.shape[0]:
            raise ValidationError("eigenvalue count must match eigenvector dimension")
        if np.any(np.diff(w) < 0):
            raise ValidationError("eigenvalues must be sorted ascending")
        unit_defect = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0]))))
        if unit_defect > TOL_DECOMPOSITION:
            raise ValidationError(
                f"eigenvector matrix is not unitary: defect {unit_defect:.3e}"
            )
        w.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def bohr_frequencies(self) -> np.ndarray:
        """Matrix of level differences: B[n, m] = omega_n - omega_m."""
        w = self.eigenvalues
        return w[:, None] - w[None, :]


def eigendecompose(operator: HermitianOperator) -> EnergyDecomposition:
    """Spectral decomposition with ascending eigenvalues.

    Degenerate eigenvalues are allowed; the returned eigenvectors span each
    degenerate subspace orthonormally. The reconstruction V diag(w) V^dagger
    is checked against the input to TOL_DECOMPOSITION.
    """
    w, v = np.linalg.eigh(operator.matrix)
    recon = (v * w) @ v.conj().T
    defect = float(np.max(np.abs(recon - operator.matrix)))
    if defect > TOL_DECOMPOSITION:
        raise ValidationError(
            f"eigendecomposition failed to reconstruct the operator: "
            f"defect {defect:.3e} (tol {TOL_DECOMPOSITION:.1e})"
        )
    return EnergyDecomposition(eigenvalues=w, eigenvectors=v)


def build_projector(operator: HermitianOperator, center: float, halfwidth: float) -> Projector:
    """Projector onto eigenvectors with eigenvalue in [center - hw, center + hw].

    The selection compares eigenvalues only, so within a degenerate subspace
    either every eigenvector is included or none is; the result is therefore
    basis independent. An empty selection yields the zero matrix.
    """
    if halfwidth <= 0:
        raise ValidationError(f"halfwidth must be positive, got {halfwidth}")
    dec = eigendecompose(operator)
    mask = np.abs(dec.eigenvalues - center) <= halfwidth
    cols = dec.eigenvectors[:, mask]
    p = cols @ cols.conj().T
    return Projector(matrix=p, interval=(center, halfwidth))


def unitary_evolve(rho0: DensityMatrix, hamiltonian: HermitianOperator, t: float) -> DensityMatrix:
    """Evolve rho0 by U(t) = exp(-i H t), so that in the energy eigenbasis
    rho_nm(t) = rho_nm(0) * exp(-i (omega_n - omega_m) t).

    Computed through the eigendecomposition of H (exact for Hermitian H),
    which preserves the spectrum of rho up to roundoff.
    """
    if rho0.dim != hamiltonian.dim:
        raise DimensionMismatchError(
            f"state dimension {rho0.dim} != Hamiltonian dimension {hamiltonian.dim}"
        )
    dec = eigendecompose(hamiltonian)
    v = dec.eigenvectors
    rho_eig = v.conj().T @ rho0.matrix @ v
    phases = np.exp(-1j * dec.bohr_frequencies * t)
    evolved = v @ (rho_eig * phases) @ v.conj().T
    return DensityMatrix(evolved)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a
