"""Signals, Gram matrices and the elementary projections.

A time-translation-invariant response function sampled on ``t_j = j*dt``
is stored only for ``j >= 0``; negative times follow from ``f(-t) = f(t)*``.
Its Gram matrix is the Hermitian Toeplitz matrix with ``f_k`` on the k-th
superdiagonal and ``conj(f_k)`` on the k-th subdiagonal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import toeplitz

PSD_RTOL = 1e-10
EIG_RTOL = 1e-12


class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's preconditions."""


class InfeasibleError(InvalidInputError):
    """Raised when no positive semidefinite completion can be found."""


class NumericalError(RuntimeError):
    """Raised when an internal numerical step fails."""


def psd_tol(f0: float) -> float:
    """Default tolerance on the smallest Gram eigenvalue."""
    return PSD_RTOL * max(abs(float(f0)), 1.0)


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples ``values[j] = f(j*dt)`` on a uniform grid from 0."""

    dt: float
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex).ravel()
        if values.size == 0:
            raise InvalidInputError("signal must contain at least one sample")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise InvalidInputError(f"dt must be positive, got {self.dt}")
        values.setflags(write=False)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size

    @property
    def f0(self) -> float:
        return float(self.values[0].real)

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.values.size)

    def with_values(self, values) -> "SampledSignal":
        return SampledSignal(self.dt, values)


@dataclass(frozen=True)
class HermitianToeplitz:
    """Hermitian Toeplitz matrix stored by its first row.

    The imaginary part of ``first_row[0]`` is discarded so the diagonal is
    real and the dense realization is Hermitian by construction.
    """

    first_row: np.ndarray

    def __post_init__(self):
        row = np.array(self.first_row, dtype=complex).ravel()
        if row.size == 0:
            raise InvalidInputError("Toeplitz matrix must have size >= 1")
        row[0] = row[0].real
        row.setflags(write=False)
        object.__setattr__(self, "first_row", row)

    @property
    def size(self) -> int:
        return self.first_row.size

    @property
    def f0(self) -> float:
        return float(self.first_row[0].real)

    def dense(self) -> np.ndarray:
        # scipy's toeplitz(c, r) puts c down the first column
        return toeplitz(self.first_row.conj(), self.first_row)


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _check_hermitian(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {M.shape}")
    scale = max(np.linalg.norm(M), 1.0)
    if np.max(np.abs(M - M.conj().T), initial=0.0) > 1e-12 * scale:
        raise InvalidInputError("matrix is not Hermitian")
    return M


def build_gramian(s: SampledSignal) -> HermitianToeplitz:
    return HermitianToeplitz(s.values)


def eig_hermitian(M) -> EigenDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    M = _check_hermitian(M)
    try:
        w, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigensolver failed: {exc}") from exc
    return EigenDecomposition(w, V)


def eigvals_toeplitz(T: HermitianToeplitz) -> np.ndarray:
    return np.linalg.eigvalsh(T.dense())


def min_eigenvalue(T: HermitianToeplitz) -> float:
    return float(eigvals_toeplitz(T)[0])


def project_psd(M) -> np.ndarray:
    """Frobenius-nearest positive semidefinite matrix (clip negative eigenvalues)."""
    w, V = eig_hermitian(M)
    P = (V * np.maximum(w, 0.0)) @ V.conj().T
    return 0.5 * (P + P.conj().T)


def project_toeplitz(M) -> HermitianToeplitz:
    """Frobenius-nearest Hermitian Toeplitz matrix: average each superdiagonal."""
    M = _check_hermitian(M)
    m = M.shape[0]
    row = np.array([np.trace(M, offset=k) / (m - k) for k in range(m)])
    return HermitianToeplitz(row)


def enforce_norm(T: HermitianToeplitz, f0: float) -> HermitianToeplitz:
    """Pin the diagonal (the t=0 value) to ``f0``."""
    if not f0 >= 0:
        raise InvalidInputError(f"norm f0 must be nonnegative, got {f0}")
    row = T.first_row.copy()
    row[0] = f0
    return HermitianToeplitz(row)


def quadratic_form(s: SampledSignal, lam) -> float:
    """``sum_ij f(t_i - t_j) conj(lam_i) lam_j`` on the signal's own grid."""
    lam = np.asarray(lam, dtype=complex)
    G = build_gramian(s).dense()
    # dense()[i, j] = f_{j-i}; transpose gives f_{i-j}
    return float(np.real(lam.conj() @ G.T @ lam))
