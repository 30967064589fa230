"""Damped Fourier transform and Bochner positivity check."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import InvalidInputError, SampledSignal

DEFAULT_POINTS = 2048
_CHUNK = 256


@dataclass(frozen=True)
class Spectrum:
    """``values.real`` is the spectral function A(omega); ``values.imag`` its dispersive partner."""

    omegas: np.ndarray
    values: np.ndarray
    tau: float
    dt: float

    @property
    def real(self) -> np.ndarray:
        return self.values.real


@dataclass(frozen=True)
class PositivityReport:
    min_value: float
    fraction_below: float
    passed: bool
    tol: float

    def as_dict(self) -> dict:
        return {"min_value": self.min_value, "fraction_below": self.fraction_below,
                "passed": self.passed, "tol": self.tol}


def default_grid(dt: float, n: int = DEFAULT_POINTS) -> np.ndarray:
    return np.linspace(-np.pi / dt, np.pi / dt, n)


def damped_ft(s: SampledSignal, tau: float, omegas: Optional[np.ndarray] = None) -> Spectrum:
    """``dt * (f_0 + 2 sum_{j>=1} f_j exp(i w t_j) exp(-t_j/tau))``.

    Folding in ``f(-t) = f(t)*`` makes the two-sided transform equal to the
    real part of this expression, so ``Re`` is A(omega) and is nonnegative
    for an untruncated positive definite signal.
    """
    if not tau > 0:
        raise InvalidInputError(f"tau must be positive, got {tau}")
    omegas = default_grid(s.dt) if omegas is None else np.asarray(omegas, dtype=float)
    if omegas.ndim != 1 or omegas.size == 0:
        raise InvalidInputError("omegas must be a nonempty 1-d grid")
    t = s.times[1:]
    damped = s.values[1:] * np.exp(-t / tau)
    out = np.empty(omegas.size, dtype=complex)
    for start in range(0, omegas.size, _CHUNK):
        w = omegas[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.exp(1j * np.outer(w, t)) @ damped
    values = s.dt * (s.values[0].real + 2.0 * out)
    return Spectrum(omegas, values, float(tau), s.dt)


def check_positivity(sp: Spectrum, tol: float = 0.0) -> PositivityReport:
    a = sp.values.real
    below = a < -tol
    return PositivityReport(float(a.min()), float(np.mean(below)), bool(not below.any()), float(tol))


def tail_bound(f0: float, n: int, dt: float, tau: float) -> float:
    """Bound on ``|A(w)|`` contributed by samples ``j >= n`` when ``|f_j| <= f0``.

    ``2 dt f0 sum_{j>=n} exp(-j dt / tau)``; this is the slack by which a
    truncated transform of a positive definite signal may dip below zero.
    """
    q = np.exp(-dt / tau)
    return float(2.0 * dt * f0 * q ** n / (1.0 - q))


def find_peaks(sp: Spectrum, count: int = 2) -> np.ndarray:
    """Frequencies of the ``count`` largest local maxima of ``Re A``, sorted by frequency."""
    a = sp.values.real
    interior = (a[1:-1] > a[:-2]) & (a[1:-1] >= a[2:])
    idx = np.flatnonzero(interior) + 1
    top = idx[np.argsort(-a[idx], kind="stable")[:count]]
    return np.sort(sp.omegas[top])
