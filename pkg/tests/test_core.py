import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from helpers import random_hermitian
from pdresponse import (
    HermitianToeplitz,
    InvalidInputError,
    SampledSignal,
    build_gramian,
    eig_hermitian,
    enforce_norm,
    min_eigenvalue,
    project_psd,
    project_toeplitz,
    psd_tol,
)
from pdresponse.core import quadratic_form

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def complex_rows(draw, min_size=1, max_size=7):
    n = draw(st.integers(min_size, max_size))
    re = draw(st.lists(finite, min_size=n, max_size=n))
    im = draw(st.lists(finite, min_size=n, max_size=n))
    return np.array(re) + 1j * np.array(im)


def _det3(M):
    return (M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]))


def _closed_form_min_eig(M):
    # independent of LAPACK: closed-form roots of the characteristic polynomial
    if M.shape == (2, 2):
        a, d, b = M[0, 0].real, M[1, 1].real, M[0, 1]
        return (a + d) / 2 - np.hypot((a - d) / 2, abs(b))
    q = np.trace(M).real / 3
    off = abs(M[0, 1]) ** 2 + abs(M[0, 2]) ** 2 + abs(M[1, 2]) ** 2
    p = np.sqrt((np.sum((np.diag(M).real - q) ** 2) + 2 * off) / 6)
    if p == 0:
        return q
    r = np.clip(_det3((M - q * np.eye(3)) / p).real / 2, -1, 1)
    return q + 2 * p * np.cos(np.arccos(r) / 3 + 2 * np.pi / 3)


# --- SampledSignal / Gramian -------------------------------------------------

def test_gramian_layout():
    T = build_gramian(SampledSignal(0.1, [2.0, 1 + 1j, 0.5j]))
    D = T.dense()
    expected = np.array([[2, 1 + 1j, 0.5j],
                         [1 - 1j, 2, 1 + 1j],
                         [-0.5j, 1 - 1j, 2]])
    assert np.allclose(D, expected)
    assert np.allclose(D, D.conj().T)


def test_gramian_drops_imaginary_f0():
    T = HermitianToeplitz(np.array([1.0 + 0.3j, 0.2]))
    assert T.f0 == 1.0
    assert np.allclose(np.diag(T.dense()), 1.0)


def test_empty_signal_rejected():
    with pytest.raises(InvalidInputError):
        SampledSignal(0.1, [])
    with pytest.raises(InvalidInputError):
        SampledSignal(0.0, [1.0])


def test_signal_values_read_only():
    s = SampledSignal(1.0, [1.0, 0.5])
    with pytest.raises(ValueError):
        s.values[0] = 3.0


# --- eigensolver ---------------------------------------------------------------

def test_eig_examples():
    w, _ = eig_hermitian(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(w, [1.0, 3.0])
    w, _ = eig_hermitian(np.array([[0.0, 1j], [-1j, 0.0]]))
    assert np.allclose(w, [-1.0, 1.0])


def test_eig_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InvalidInputError):
        eig_hermitian(np.ones((2, 3)))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**31 - 1))
def test_eig_reconstruction_and_orthonormality(m, seed):
    M = random_hermitian(np.random.default_rng(seed), m)
    w, V = eig_hermitian(M)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(V.conj().T @ V, np.eye(m), atol=1e-12)
    assert np.allclose((V * w) @ V.conj().T, M, atol=1e-10)


def test_min_eigenvalue_examples():
    assert np.isclose(min_eigenvalue(HermitianToeplitz(np.array([1.0, 2.0]))), -1.0)
    assert np.isclose(min_eigenvalue(HermitianToeplitz(np.array([1.0, 1.0, 1.0]))), 0.0, atol=1e-14)
    assert np.isclose(min_eigenvalue(HermitianToeplitz(np.array([1.0, 0.0, 0.0]))), 1.0)


@settings(max_examples=100, deadline=None)
@given(complex_rows(min_size=2, max_size=3))
@example(np.array([1.0, 0.0, 0.0]))
def test_min_eigenvalue_matches_closed_form(row):
    T = HermitianToeplitz(row)
    expected = _closed_form_min_eig(T.dense())
    scale = max(1.0, np.abs(row).max())
    assert abs(min_eigenvalue(T) - expected) <= 1e-10 * scale


# --- projections ---------------------------------------------------------------

def test_project_psd_clips():
    assert np.allclose(project_psd(np.diag([1.0, -1.0])), np.diag([1.0, 0.0]))
    P = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(project_psd(P), P)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**31 - 1))
def test_project_psd_properties(m, seed):
    M = random_hermitian(np.random.default_rng(seed), m)
    P = project_psd(M)
    assert np.linalg.eigvalsh(P)[0] >= -1e-10
    assert np.allclose(project_psd(P), P, atol=1e-10)
    # any other PSD matrix, e.g. a scaled copy of P, is not closer
    for alpha in (0.5, 0.9, 1.1):
        assert np.linalg.norm(M - P) <= np.linalg.norm(M - alpha * P) + 1e-12


def test_project_toeplitz_example():
    T = project_toeplitz(np.array([[1.0, 2.0], [2.0, 3.0]]))
    assert np.allclose(T.first_row, [2.0, 2.0])


def test_project_toeplitz_fixed_point():
    row = np.array([1.0, 0.3 + 0.1j, -0.2j])
    T = HermitianToeplitz(row)
    assert np.allclose(project_toeplitz(T.dense()).first_row, row)


@pytest.mark.parametrize("seed", range(5))
def test_project_toeplitz_is_locally_optimal(seed):
    rng = np.random.default_rng(seed)
    M = random_hermitian(rng, 6)
    T = project_toeplitz(M)
    base = np.linalg.norm(M - T.dense())
    eps = 1e-4
    for k in range(6):
        for step in (eps, -eps, 1j * eps, -1j * eps):
            row = T.first_row.copy()
            row[k] += step
            assert np.linalg.norm(M - HermitianToeplitz(row).dense()) >= base - 1e-12


def test_enforce_norm():
    T = enforce_norm(HermitianToeplitz(np.array([0.7, 0.1j])), 0.289444)
    assert T.f0 == 0.289444
    assert T.first_row[1] == 0.1j
    with pytest.raises(InvalidInputError):
        enforce_norm(T, -1.0)


# --- positive definiteness -----------------------------------------------------

def test_quadratic_form_matches_definition(dimer_exact):
    rng = np.random.default_rng(1)
    s = SampledSignal(dimer_exact.dt, dimer_exact.values[:12])
    f = s.values
    for _ in range(5):
        lam = rng.normal(size=12) + 1j * rng.normal(size=12)
        direct = 0.0
        for i in range(12):
            for j in range(12):
                d = i - j
                fij = f[d] if d >= 0 else np.conj(f[-d])
                direct += fij * np.conj(lam[i]) * lam[j]
        assert np.isclose(quadratic_form(s, lam), direct.real)
        assert abs(direct.imag) < 1e-12


def test_positive_definite_signal_bounded_by_f0(dimer_exact, ssh_exact):
    for s in (dimer_exact, ssh_exact):
        assert min_eigenvalue(build_gramian(s)) >= -psd_tol(s.f0)
        assert np.all(np.abs(s.values) <= s.f0 * (1 + 1e-12))
