"""Vandermonde (Caratheodory-Fejer) decomposition of PSD Toeplitz matrices.

A PSD Toeplitz matrix of rank r < size factors as ``T = A P A^H`` with
``A[j, k] = exp(i * omega_k * j * dt)`` and ``P`` diagonal and positive, so
the first row is ``f_j = sum_k p_k exp(-i * omega_k * j * dt)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar, nnls

from .core import (
    HermitianToeplitz,
    InvalidInputError,
    NumericalError,
    SampledSignal,
    eig_hermitian,
    psd_tol,
)

SINGULAR_TOL = 1e-10
CF_TOL = 1e-8
MUSIC_GRID = 4096


@dataclass(frozen=True)
class PoleModel:
    omegas: np.ndarray
    weights: np.ndarray
    dt: float
    residual: float = 0.0   # ||T - A P A^H||_F / ||T||_F of the fit
    method: str = ""

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float).ravel()
        weights = np.asarray(self.weights, dtype=float).ravel()
        if omegas.shape != weights.shape:
            raise InvalidInputError("omegas and weights must have equal length")
        if np.any(weights <= 0):
            raise InvalidInputError("pole weights must be strictly positive")
        order = np.argsort(omegas)
        object.__setattr__(self, "omegas", omegas[order])
        object.__setattr__(self, "weights", weights[order])

    def __len__(self):
        return self.omegas.size

    def values(self, n_total: int) -> np.ndarray:
        t = self.dt * np.arange(n_total)
        return np.exp(-1j * np.outer(t, self.omegas)) @ self.weights


def wrap_frequency(omega, dt: float):
    """Map angular frequencies into (-pi/dt, pi/dt]."""
    period = 2 * np.pi / dt
    w = np.mod(np.asarray(omega, dtype=float) + np.pi / dt, period) - np.pi / dt
    return np.where(np.isclose(w, -np.pi / dt, rtol=0, atol=1e-14 * period), np.pi / dt, w)


def estimate_rank(T: HermitianToeplitz, singular_tol: float = SINGULAR_TOL) -> int:
    """Number of eigenvalues above ``singular_tol * lambda_max``."""
    w = eig_hermitian(T.dense()).eigenvalues
    if w[0] < -psd_tol(T.f0):
        raise InvalidInputError(f"matrix is not PSD (min eigenvalue {w[0]:.3g})")
    if w[-1] <= 0:
        return 0
    return int(np.count_nonzero(w > singular_tol * w[-1]))


def _steering(omegas, m: int, dt: float) -> np.ndarray:
    return np.exp(1j * dt * np.outer(np.arange(m), np.atleast_1d(omegas)))


def _null_spectrum(noise: np.ndarray, omegas, dt: float) -> np.ndarray:
    m = noise.shape[0]
    proj = noise.conj().T @ _steering(omegas, m, dt)
    return np.sum(np.abs(proj) ** 2, axis=0) / m


def _pisarenko(T: np.ndarray, r: int, dt: float) -> np.ndarray:
    sub = T[: r + 1, : r + 1]
    u = eig_hermitian(sub).eigenvectors[:, 0]
    # a(w)^H u = sum_i u_i z^i with z = exp(-i w dt)
    roots = np.roots(u[::-1])
    if roots.size != r or not np.all(np.isfinite(roots)):
        raise NumericalError(
            f"null-space polynomial gave {roots.size} finite roots, expected {r}; "
            f"|u| = {np.abs(u)}")
    return -np.angle(roots) / dt


def _music_peaks(noise: np.ndarray, r: int, dt: float, n_grid: int) -> np.ndarray:
    grid = -np.pi / dt + (2 * np.pi / dt) * (np.arange(n_grid) + 1) / n_grid
    q = _null_spectrum(noise, grid, dt)
    # local minima of the null spectrum = peaks of the pseudospectrum (circular grid)
    is_min = (q <= np.roll(q, 1)) & (q < np.roll(q, -1))
    idx = np.flatnonzero(is_min)
    if idx.size < r:
        raise NumericalError(f"MUSIC found {idx.size} peaks, expected {r}")
    best = idx[np.argsort(q[idx], kind="stable")[:r]]
    return grid[np.sort(best)]


def _polish(noise: np.ndarray, omegas: np.ndarray, dt: float) -> np.ndarray:
    m = noise.shape[0]
    omegas = np.sort(omegas)
    half = np.pi / (m * dt)
    if omegas.size > 1:
        gaps = np.diff(np.concatenate([omegas, omegas[:1] + 2 * np.pi / dt]))
        half = min(half, 0.5 * gaps.min())
    out = np.empty_like(omegas)
    for k, w0 in enumerate(omegas):
        res = minimize_scalar(lambda w: _null_spectrum(noise, w, dt)[0],
                              bounds=(w0 - half, w0 + half), method="bounded",
                              options={"xatol": 1e-13})
        out[k] = res.x if res.fun <= _null_spectrum(noise, w0, dt)[0] else w0
    return out


def fit_weights(first_row: np.ndarray, omegas: np.ndarray, dt: float) -> np.ndarray:
    """Nonnegative least-squares pole strengths reproducing ``first_row``."""
    A = np.conj(_steering(omegas, first_row.size, dt))
    lhs = np.vstack([A.real, A.imag])
    rhs = np.concatenate([first_row.real, first_row.imag])
    p, _ = nnls(lhs, rhs)
    return p


def decompose_cf(T: HermitianToeplitz, r: int, dt: float = 1.0,
                 singular_tol: float = SINGULAR_TOL,
                 music_grid: int = MUSIC_GRID) -> PoleModel:
    """Recover ``r`` poles (frequency, positive weight) from a PSD Toeplitz matrix.

    When the matrix has numerical rank ``r`` the frequencies come from the
    roots of the null vector of the leading ``(r+1) x (r+1)`` block; otherwise
    from the ``r`` deepest minima of the MUSIC null spectrum on a uniform
    grid. Either estimate is then refined by minimizing the null spectrum of
    the full noise subspace. Weights are fitted by NNLS and poles whose weight
    comes out zero are dropped.
    """
    m = T.size
    if not 1 <= r <= m - 1:
        raise InvalidInputError(f"rank r={r} must satisfy 1 <= r <= {m - 1}")
    M = T.dense()
    w, U = eig_hermitian(M)
    if w[0] < -psd_tol(T.f0):
        raise InvalidInputError(f"matrix is not PSD (min eigenvalue {w[0]:.3g})")
    noise = U[:, : m - r]
    exact = w[m - r - 1] <= singular_tol * max(w[-1], 0.0)
    if exact:
        omegas = _pisarenko(M, r, dt)
        method = "pisarenko"
    else:
        omegas = _music_peaks(noise, r, dt, music_grid)
        method = "music"
    omegas = wrap_frequency(_polish(noise, omegas, dt), dt)

    p = fit_weights(T.first_row, omegas, dt)
    keep = p > 0
    if not np.any(keep):
        raise NumericalError("all fitted pole weights vanished")
    omegas, p = omegas[keep], p[keep]
    A = _steering(omegas, m, dt)
    recon = (A * p) @ A.conj().T
    residual = float(np.linalg.norm(M - recon) / max(np.linalg.norm(M), 1e-300))
    return PoleModel(omegas, p, dt, residual=residual, method=method)


def decompose_signal(s: SampledSignal, r: int | None = None,
                     singular_tol: float = SINGULAR_TOL) -> PoleModel:
    """:func:`decompose_cf` on the signal's Gram matrix, estimating ``r`` if absent."""
    T = HermitianToeplitz(s.values)
    if r is None:
        r = min(estimate_rank(T, singular_tol), T.size - 1)
    return decompose_cf(T, r, s.dt, singular_tol=singular_tol)


def extrapolate(model: PoleModel, n_total: int) -> SampledSignal:
    """Samples ``f_j = sum_k p_k exp(-i omega_k j dt)`` for ``j < n_total``."""
    if len(model) == 0:
        raise InvalidInputError("pole model is empty")
    if n_total < 1:
        raise InvalidInputError("n_total must be >= 1")
    values = model.values(n_total)
    values[0] = values[0].real
    return SampledSignal(model.dt, values)
