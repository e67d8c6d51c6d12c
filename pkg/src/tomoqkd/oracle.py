"""Dense 4x4 density-matrix oracle, independent of the analytic formulas.

Everything here works on explicit matrices in the computational basis
|z0 z0>, |z0 z1>, |z1 z0>, |z1 z1> (row-major), so it can cross-check
the closed-form marginal and distillability results by direct projector
arithmetic and eigendecomposition.
"""

from __future__ import annotations

import numpy as np

from .states import Basis, BellDiagonalState

__all__ = [
    "density_matrix",
    "joint_outcome_probs",
    "partial_transpose",
    "min_partial_transpose_eigenvalue",
    "is_nppt",
]

_SQRT_HALF = 1.0 / np.sqrt(2.0)

# Bell kets |z_ab> = 2^{-1/2} sum_k (-1)^{kb} |z_k, z_{k+a}>, rows ordered
# (a, b) = 00, 01, 10, 11.
_BELL_KETS = _SQRT_HALF * np.array(
    [
        [1, 0, 0, 1],
        [1, 0, 0, -1],
        [0, 1, 1, 0],
        [0, 1, -1, 0],
    ],
    dtype=complex,
)

# Single-qubit eigenvectors with eigenvalue (-1)^k for outcome k,
# indexed [Basis.value][outcome].
_EIGENVECTORS = np.empty((3, 2, 2), dtype=complex)
_EIGENVECTORS[Basis.X.value] = _SQRT_HALF * np.array([[1, 1], [1, -1]])
_EIGENVECTORS[Basis.Y.value] = _SQRT_HALF * np.array([[1, 1j], [1, -1j]])
_EIGENVECTORS[Basis.Z.value] = np.array([[1, 0], [0, 1]])


def _projector_table() -> np.ndarray:
    """(3, 3, 2, 2, 4, 4) table of two-qubit projectors |m_i n_j><m_i n_j|."""
    table = np.empty((3, 3, 2, 2, 4, 4), dtype=complex)
    for a in range(3):
        for b in range(3):
            for i in range(2):
                for j in range(2):
                    ket = np.kron(_EIGENVECTORS[a, i], _EIGENVECTORS[b, j])
                    table[a, b, i, j] = np.outer(ket, ket.conj())
    return table


_PROJECTORS = _projector_table()


def density_matrix(state: BellDiagonalState) -> np.ndarray:
    """4x4 density matrix of the Bell mixture in the computational basis."""
    rho = np.zeros((4, 4), dtype=complex)
    for weight, ket in zip(state.probs, _BELL_KETS):
        rho += weight * np.outer(ket, ket.conj())
    return rho


def joint_outcome_probs(state: BellDiagonalState, basis_a: Basis, basis_b: Basis) -> np.ndarray:
    """2x2 outcome table P[i, j] for projective measurements on both qubits."""
    rho = density_matrix(state)
    proj = _PROJECTORS[basis_a.value, basis_b.value]
    probs = np.einsum("ijkl,lk->ij", proj, rho).real
    return np.clip(probs, 0.0, None)


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose the second qubit's indices."""
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def min_partial_transpose_eigenvalue(state: BellDiagonalState) -> float:
    """Smallest eigenvalue of the partially transposed density matrix."""
    return float(np.linalg.eigvalsh(partial_transpose(density_matrix(state)))[0])


def is_nppt(state: BellDiagonalState, tol: float = 1e-12) -> bool:
    """Negative partial transpose, i.e. distillable, with a strictness margin."""
    return min_partial_transpose_eigenvalue(state) < -tol
