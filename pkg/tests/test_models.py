import numpy as np
import pytest

from pdresponse import (
    DimerSpec,
    InvalidInputError,
    NoiseSpec,
    SSHSpec,
    add_noise,
    build_gramian,
    dimer_greens,
    min_eigenvalue,
    ssh_greens,
    time_grid,
)
from pdresponse.models import (
    DOWN,
    dimer_density,
    dimer_hamiltonian,
    fermion_operators,
    momentum_state,
    solve_dimer,
    ssh_poles,
)

TIMES = time_grid(0.1, 10.0)


def _bloch_matrix(k, delta, mu, convention="main_text"):
    # hand-derived k / k+pi block of the dimerized ring
    d = delta if convention == "main_text" else delta / 2
    return np.array([[-2 * np.cos(k) - mu, 2j * d * np.sin(k)],
                     [-2j * d * np.sin(k), 2 * np.cos(k) - mu]])


# --- Hubbard dimer -------------------------------------------------------------

def test_dimer_g0_and_density():
    spec = DimerSpec(U=5, eps=2.3, v=1, beta=10)
    g = dimer_greens(spec, TIMES)
    assert abs(g.f0 - 0.289444) < 1e-6
    assert abs(dimer_density(spec) - 0.710556) < 1e-6
    assert np.isclose(g.f0 + dimer_density(spec), 1.0, atol=1e-12)
    assert g.values[0].imag == 0.0


def test_free_level_is_constant_half():
    g = dimer_greens(DimerSpec(U=0, eps=0, v=0, beta=3.0), TIMES)
    assert np.allclose(g.values, 0.5, atol=1e-12)


def test_site_and_spin_degeneracy():
    ref = dimer_greens(DimerSpec(), TIMES)
    for site, spin in [(1, 0), (0, DOWN), (1, DOWN)]:
        g = dimer_greens(DimerSpec(site=site, spin=spin), TIMES)
        assert np.allclose(g.values, ref.values, atol=1e-12)


def test_anticommutation_relations():
    c = fermion_operators(4)
    eye = np.eye(16)
    for i in range(4):
        for j in range(4):
            assert np.allclose(c[i] @ c[j].T + c[j].T @ c[i], eye * (i == j))
            assert np.allclose(c[i] @ c[j] + c[j] @ c[i], 0.0)


def test_dimer_hamiltonian_structure():
    H, c = dimer_hamiltonian(DimerSpec())
    assert np.allclose(H, H.conj().T)
    N = sum(ci.T @ ci for ci in c)
    assert np.allclose(H @ N, N @ H)
    sol = solve_dimer(DimerSpec())
    assert abs(sol.weights.sum() - 1.0) < 1e-12


def test_dimer_lehmann_matches_time_evolution():
    # direct trace formula with matrix exponentials in the eigenbasis
    spec = DimerSpec()
    H, c = dimer_hamiltonian(spec)
    E, V = np.linalg.eigh(H)
    rho = V @ np.diag(np.exp(-spec.beta * (E - E[0]))) @ V.T
    rho /= np.trace(rho)
    cc = c[0]
    for t in (0.0, 0.7, 3.3):
        U = V @ np.diag(np.exp(-1j * E * t)) @ V.T
        ct = U.conj().T @ cc @ U
        expected = np.trace(rho @ ct @ cc.T)
        got = dimer_greens(spec, [0.0, t] if t else [0.0]).values[-1]
        assert np.isclose(got, expected, atol=1e-12)


def test_dimer_transitions_are_energy_differences():
    sol = solve_dimer(DimerSpec())
    omegas, weights = sol.poles()
    diffs = (sol.energies[:, None] - sol.energies[None, :]).ravel()
    for w in omegas:
        assert np.min(np.abs(diffs - w)) < 1e-12
    assert np.all(weights > 0)
    assert np.isclose(weights.sum(), 0.2894443585, atol=1e-9)


def test_dimer_signal_is_positive_definite():
    g = dimer_greens(DimerSpec(), TIMES)
    assert min_eigenvalue(build_gramian(g)) >= -1e-10 * g.f0


# --- SSH ring --------------------------------------------------------------------

def test_ssh_gap_closes_single_frequency():
    omegas, weights = ssh_poles(SSHSpec(delta=0.0, mu=0.0, k=np.pi))
    assert omegas.size == 1
    assert np.isclose(weights.sum(), 1.0)
    assert np.isclose(omegas[0], 2.0)


@pytest.mark.parametrize("convention", ["main_text", "supplement"])
def test_ssh_frequencies_match_bloch_matrix(convention):
    spec = SSHSpec(delta=0.4, mu=-3.0, k=np.pi / 2, convention=convention)
    omegas, weights = ssh_poles(spec)
    E, V = np.linalg.eigh(_bloch_matrix(spec.k, spec.delta, spec.mu, convention))
    assert np.allclose(omegas, E, atol=1e-12)
    assert np.allclose(weights, np.abs(V[0]) ** 2, atol=1e-12)


def test_ssh_main_text_values():
    omegas, weights = ssh_poles(SSHSpec())
    assert np.allclose(omegas, [2.2, 3.8])
    assert np.allclose(weights, [0.5, 0.5])


@pytest.mark.parametrize("k", [0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4, np.pi])
def test_ssh_signal_bounded_and_psd(k):
    s = ssh_greens(SSHSpec(k=k), time_grid(0.2, 10.0))
    assert s.f0 == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(s.values) <= 1 + 1e-12)
    assert min_eigenvalue(build_gramian(s)) >= -1e-10
    assert ssh_poles(SSHSpec(k=k))[0].size <= 2


def test_ssh_incommensurate_k():
    with pytest.raises(InvalidInputError):
        momentum_state(8, 1.0)
    with pytest.raises(InvalidInputError):
        ssh_greens(SSHSpec(k=0.3), TIMES)


def test_spec_validation():
    with pytest.raises(InvalidInputError):
        SSHSpec(n_sites=7)
    with pytest.raises(InvalidInputError):
        DimerSpec(beta=0.0)
    with pytest.raises(InvalidInputError):
        NoiseSpec(sigma=-0.1)


# --- noise -----------------------------------------------------------------------

def test_zero_noise_is_identity():
    g = dimer_greens(DimerSpec(), TIMES)
    assert np.array_equal(add_noise(g, NoiseSpec(sigma=0.0, seed=4)).values, g.values)


def test_noise_deterministic():
    g = dimer_greens(DimerSpec(), TIMES)
    a = add_noise(g, NoiseSpec(0.1, seed=7))
    b = add_noise(g, NoiseSpec(0.1, seed=7))
    c = add_noise(g, NoiseSpec(0.1, seed=8))
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_noise_standard_deviation():
    n = 10_000
    clean = ssh_greens(SSHSpec(), 0.01 * np.arange(n))
    noisy = add_noise(clean, NoiseSpec(0.1, seed=0))
    resid = (noisy.values - clean.values).real
    # (n-1) s^2 / sigma^2 ~ chi2(n-1); its 5-sigma window is far inside +-3% on the std
    std = resid.std(ddof=1)
    assert abs(std - 0.1) <= 0.03 * 0.1
    chi2 = (n - 1) * std ** 2 / 0.1 ** 2
    assert abs(chi2 - (n - 1)) <= 5 * np.sqrt(2 * (n - 1))


def test_real_only_noise():
    g = dimer_greens(DimerSpec(), TIMES)
    noisy = add_noise(g, NoiseSpec(0.1, seed=0, target="real_only"))
    assert np.array_equal(noisy.values.imag, g.values.imag)
    assert not np.array_equal(noisy.values.real, g.values.real)
