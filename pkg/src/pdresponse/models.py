"""Exactly solvable test systems and Gaussian noise.

The Hubbard dimer is solved by full diagonalization of its 16-state Fock
space; the SSH ring by diagonalizing the single-particle hopping matrix.
Greater Green's functions are returned without their usual -i prefactor.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InvalidInputError, SampledSignal

UP, DOWN = 0, 1


@dataclass(frozen=True)
class DimerSpec:
    U: float = 5.0
    eps: float = 2.3
    v: float = 1.0
    beta: float = 10.0
    site: int = 0
    spin: int = UP

    def __post_init__(self):
        if not self.beta > 0:
            raise InvalidInputError("beta must be positive")
        if self.site not in (0, 1) or self.spin not in (UP, DOWN):
            raise InvalidInputError("site must be 0/1 and spin 0 (up) / 1 (down)")


@dataclass(frozen=True)
class SSHSpec:
    n_sites: int = 8
    delta: float = 0.4
    mu: float = -3.0
    vnn: float = 1.0
    k: float = np.pi / 2
    convention: str = "main_text"

    def __post_init__(self):
        if self.n_sites < 4 or self.n_sites % 2:
            raise InvalidInputError("n_sites must be even and >= 4")
        if abs(self.delta) >= 2:
            raise InvalidInputError("|delta| must be < 2")
        if self.convention not in ("main_text", "supplement"):
            raise InvalidInputError(f"unknown SSH convention {self.convention!r}")


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 0.1
    seed: int = 0
    target: str = "both_parts"

    def __post_init__(self):
        if not self.sigma >= 0:
            raise InvalidInputError("sigma must be nonnegative")
        if self.target not in ("real_only", "both_parts"):
            raise InvalidInputError(f"unknown noise target {self.target!r}")


def time_grid(dt: float, t_max: float) -> np.ndarray:
    n = int(round(t_max / dt))
    return dt * np.arange(n + 1)


def _grid_dt(times) -> tuple[np.ndarray, float]:
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0:
        raise InvalidInputError("time grid must start at t=0")
    if times.size == 1:
        return times, 1.0
    dt = times[1] - times[0]
    if dt <= 0 or not np.allclose(np.diff(times), dt, rtol=1e-9, atol=0):
        raise InvalidInputError("time grid must be uniform and increasing")
    return times, dt


# --- Hubbard dimer -------------------------------------------------------

def fermion_operators(n_modes: int) -> list[np.ndarray]:
    """Annihilation operators in the occupation basis with Jordan-Wigner signs.

    Basis state ``s`` has mode ``k`` occupied iff bit ``k`` of ``s`` is set.
    """
    dim = 2 ** n_modes
    ops = []
    for k in range(n_modes):
        c = np.zeros((dim, dim))
        for s in range(dim):
            if s >> k & 1:
                below = bin(s & ((1 << k) - 1)).count("1")
                c[s ^ (1 << k), s] = (-1) ** below
        ops.append(c)
    return ops


def _mode(site, spin):
    return 2 * site + spin


def dimer_hamiltonian(spec: DimerSpec) -> tuple[np.ndarray, list[np.ndarray]]:
    c = fermion_operators(4)
    n = [ci.T @ ci for ci in c]
    H = -spec.eps * sum(n)
    for spin in (UP, DOWN):
        a, b = c[_mode(0, spin)], c[_mode(1, spin)]
        H -= spec.v * (a.T @ b + b.T @ a)
    for site in (0, 1):
        nu, nd = n[_mode(site, UP)], n[_mode(site, DOWN)]
        H += spec.U * (nu @ nd - 0.5 * (nu + nd))
    return H, c


@dataclass(frozen=True)
class DimerSolution:
    energies: np.ndarray
    states: np.ndarray
    weights: np.ndarray      # Boltzmann probabilities, sum to 1
    annihilator: np.ndarray  # c for the measured site/spin, eigenbasis

    def transitions(self, cutoff: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
        """Lehmann poles of ``Tr[rho c(t) c^dagger]``: (omega, strength) pairs.

        ``omega = E_final - E_initial`` for ``c^dagger`` acting on a thermally
        occupied state; ``strength = p_initial * |<final|c^dagger|initial>|^2``.
        """
        cdag = self.annihilator.conj().T
        strength = np.abs(cdag) ** 2 * self.weights[None, :]
        omega = self.energies[:, None] - self.energies[None, :]
        keep = strength > cutoff
        return omega[keep], strength[keep]

    def poles(self, cutoff: float = 1e-12, merge_tol: float = 1e-9):
        """Distinct transition frequencies with summed strengths above ``cutoff``."""
        omega, strength = self.transitions()
        order = np.argsort(omega)
        merged: list[list[float]] = []
        for w, p in zip(omega[order], strength[order]):
            if merged and abs(w - merged[-1][0]) < merge_tol:
                merged[-1][1] += p
            else:
                merged.append([w, p])
        merged = np.array([m for m in merged if m[1] > cutoff])
        return merged[:, 0], merged[:, 1]


def solve_dimer(spec: DimerSpec) -> DimerSolution:
    H, c = dimer_hamiltonian(spec)
    E, V = np.linalg.eigh(H)
    boltz = np.exp(-spec.beta * (E - E[0]))
    weights = boltz / boltz.sum()
    ann = V.T @ c[_mode(spec.site, spec.spin)] @ V
    return DimerSolution(E, V, weights, ann)


def dimer_density(spec: DimerSpec) -> float:
    sol = solve_dimer(spec)
    c = sol.annihilator
    n_eig = np.real(np.diag(c.conj().T @ c))
    return float(sol.weights @ n_eig)


def dimer_greens(spec: DimerSpec, times) -> SampledSignal:
    """``G(t) = Tr[exp((-beta+it)H) c exp(-itH) c^dagger] / Z`` via Lehmann sum."""
    times, dt = _grid_dt(times)
    omega, strength = solve_dimer(spec).transitions()
    values = np.exp(-1j * np.outer(times, omega)) @ strength
    values[0] = values[0].real
    return SampledSignal(dt, values)


# --- SSH ring ------------------------------------------------------------

def ssh_hoppings(spec: SSHSpec) -> np.ndarray:
    """Bond amplitudes between site i and i+1 (periodic ring)."""
    i = np.arange(spec.n_sites)
    alt = (-1.0) ** i
    if spec.convention == "main_text":
        return spec.vnn * (1 + alt * spec.delta)
    return spec.vnn + alt * spec.delta / 2


def ssh_hamiltonian(spec: SSHSpec) -> np.ndarray:
    n = spec.n_sites
    h = -spec.mu * np.eye(n)
    for i, t in enumerate(ssh_hoppings(spec)):
        j = (i + 1) % n
        h[i, j] -= t
        h[j, i] -= t
    return h


def momentum_state(n_sites: int, k: float) -> np.ndarray:
    m = k * n_sites / (2 * np.pi)
    if abs(m - round(m)) > 1e-9:
        raise InvalidInputError(f"k={k} is not a multiple of 2*pi/{n_sites}")
    j = np.arange(n_sites)
    return np.exp(1j * k * j) / np.sqrt(n_sites)


def ssh_poles(spec: SSHSpec, merge_tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Energies and overlaps ``|<band|k>|^2`` of the single-particle eigenstates."""
    E, V = np.linalg.eigh(ssh_hamiltonian(spec))
    overlap = np.abs(V.conj().T @ momentum_state(spec.n_sites, spec.k)) ** 2
    omegas: list[float] = []
    weights: list[float] = []
    for e, w in zip(E, overlap):
        if omegas and abs(e - omegas[-1]) < merge_tol:
            weights[-1] += w
        else:
            omegas.append(e)
            weights.append(w)
    omegas, weights = np.array(omegas), np.array(weights)
    keep = weights > 1e-12
    return omegas[keep], weights[keep]


def ssh_greens(spec: SSHSpec, times) -> SampledSignal:
    """``<0| c_k(t) c_k^dagger |0>`` for the periodic SSH ring."""
    times, dt = _grid_dt(times)
    omegas, weights = ssh_poles(spec)
    values = np.exp(-1j * np.outer(times, omegas)) @ weights
    values[0] = values[0].real
    return SampledSignal(dt, values)


# --- noise ---------------------------------------------------------------

def add_noise(s: SampledSignal, noise: NoiseSpec) -> SampledSignal:
    """Add i.i.d. N(0, sigma) noise using numpy's PCG64 generator seeded by ``seed``."""
    if noise.sigma == 0:
        return s
    rng = np.random.default_rng(noise.seed)
    n = len(s)
    re = rng.normal(0.0, noise.sigma, n)
    im = rng.normal(0.0, noise.sigma, n) if noise.target == "both_parts" else 0.0
    return s.with_values(s.values + re + 1j * im)
