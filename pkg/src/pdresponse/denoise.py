"""Denoising by restoring positive semidefiniteness of the Gram matrix.

Two strategies are provided:

* :func:`denoise_alternating` cycles PSD projection, Toeplitz (diagonal)
  averaging and pinning of f_0 until the first row stops moving.
* :func:`denoise_penalty` walks through the entries one at a time and
  minimizes the squared negative eigenvalues of the Gram matrix with a
  golden-section search along the real and imaginary axes.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    HermitianToeplitz,
    InvalidInputError,
    SampledSignal,
    build_gramian,
    eigvals_toeplitz,
    enforce_norm,
    project_psd,
    project_toeplitz,
    psd_tol,
)

log = logging.getLogger(__name__)

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class DenoiseOptions:
    max_iter: int = 500
    conv_tol: Optional[float] = None       # absolute; default 1e-8 * f0
    f0_known: Optional[float] = None
    strategy: str = "alternating"
    repair: bool = True
    # penalty strategy
    sweeps: int = 3
    line_iters: int = 20
    axis_rounds: int = 1
    bracket_scale: float = 2.0
    cost_tol: Optional[float] = None       # absolute; default 1e-10 * f0**2

    def __post_init__(self):
        if self.max_iter < 1:
            raise InvalidInputError("max_iter must be >= 1")
        if self.conv_tol is not None and not self.conv_tol > 0:
            raise InvalidInputError("conv_tol must be positive")
        if self.strategy not in ("alternating", "penalty"):
            raise InvalidInputError(f"unknown strategy {self.strategy!r}")
        if self.f0_known is not None and not self.f0_known >= 0:
            raise InvalidInputError("f0_known must be nonnegative")
        if self.sweeps < 1 or self.line_iters < 1 or self.axis_rounds < 1:
            raise InvalidInputError("sweeps, line_iters and axis_rounds must be >= 1")


@dataclass
class DenoiseReport:
    iterations: int = 0
    converged: bool = False
    min_eigenvalue: float = 0.0
    final_cost: float = 0.0
    initial_cost: float = 0.0
    raw_cost: float = 0.0         # cost before the final PSD repair
    repair_shift: float = 0.0
    f0_estimated: bool = False
    history: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "min_eigenvalue": self.min_eigenvalue,
            "final_cost": self.final_cost,
            "initial_cost": self.initial_cost,
            "raw_cost": self.raw_cost,
            "repair_shift": self.repair_shift,
            "f0_estimated": self.f0_estimated,
        }


def _cost_from_eigs(w: np.ndarray) -> float:
    neg = w[w < 0]
    return float(4.0 * np.dot(neg, neg))


def cost_negative_eigs(T: HermitianToeplitz) -> float:
    """``sum_i [lam_i (sgn(lam_i) - 1)]**2``, i.e. 4 times the sum of squared negative eigenvalues."""
    return _cost_from_eigs(eigvals_toeplitz(T))


def _row_cost(row: np.ndarray) -> float:
    return cost_negative_eigs(HermitianToeplitz(row))


def shrink_to_psd(T: HermitianToeplitz) -> tuple[HermitianToeplitz, float]:
    """Make ``T`` PSD while keeping its diagonal.

    If the smallest eigenvalue is ``-s < 0`` the off-diagonal entries are
    scaled by ``f0 / (f0 + s)``, which equals ``(T + s I) * f0 / (f0 + s)``.
    """
    lam = float(eigvals_toeplitz(T)[0])
    if lam >= 0:
        return T, 0.0
    s = -lam
    row = T.first_row.copy()
    f0 = row[0].real
    row[1:] *= f0 / (f0 + s) if f0 + s > 0 else 0.0
    return HermitianToeplitz(row), s


def _finish(s: SampledSignal, T: HermitianToeplitz, report: DenoiseReport,
            repair: bool) -> tuple[SampledSignal, DenoiseReport]:
    w = eigvals_toeplitz(T)
    report.raw_cost = _cost_from_eigs(w)
    if repair and w[0] < -psd_tol(T.f0):
        T, report.repair_shift = shrink_to_psd(T)
        w = eigvals_toeplitz(T)
    report.min_eigenvalue = float(w[0])
    report.final_cost = _cost_from_eigs(w)
    return s.with_values(T.first_row), report


def denoise_alternating(s: SampledSignal, opts: Optional[DenoiseOptions] = None
                        ) -> tuple[SampledSignal, DenoiseReport]:
    """Alternate PSD projection, Toeplitz averaging and norm enforcement.

    The loop stops when two successive first rows differ by at most
    ``conv_tol`` in max-norm. A non-converged run still returns its last
    iterate, with ``report.converged = False``. With ``repair`` (default) a
    residual negative eigenvalue below ``-psd_tol`` of the final Toeplitz
    iterate is removed by :func:`shrink_to_psd`.
    """
    opts = opts or DenoiseOptions()
    T = build_gramian(s)
    report = DenoiseReport(initial_cost=cost_negative_eigs(T))
    if opts.f0_known is None:
        target = max(T.f0, 0.0)
        report.f0_estimated = True
    else:
        target = float(opts.f0_known)
    conv_tol = opts.conv_tol if opts.conv_tol is not None else 1e-8 * max(target, 1e-300)

    T = enforce_norm(T, target)
    for it in range(1, opts.max_iter + 1):
        P = project_psd(T.dense())
        T_avg = project_toeplitz(P)
        T_new = enforce_norm(T_avg, target)
        change = float(np.max(np.abs(T_new.first_row - T.first_row)))
        report.history.append(change)
        report.iterations = it
        T = T_new
        if change <= conv_tol:
            report.converged = True
            break
    if report.f0_estimated:
        # unknown norm: keep the diagonal average of the last PSD projection
        T = T_avg
    if not report.converged:
        log.warning("alternating projection did not converge in %d iterations "
                    "(last change %.3g)", opts.max_iter, report.history[-1])
    return _finish(s, T, report, opts.repair)


def noise_level(values: np.ndarray) -> float:
    """Robust noise estimate from the MAD of second differences (re and im pooled)."""
    if values.size < 3:
        return 0.0
    d2 = np.diff(values, 2)
    x = np.concatenate([d2.real, d2.imag])
    mad = np.median(np.abs(x - np.median(x)))
    # var of a second difference of white noise is 6 sigma^2
    return float(1.4826 * mad / np.sqrt(6.0))


def _golden_min(fun, a: float, b: float, iters: int) -> tuple[float, float]:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
    return (c, fc) if fc <= fd else (d, fd)


def denoise_penalty(s: SampledSignal, opts: Optional[DenoiseOptions] = None
                    ) -> tuple[SampledSignal, DenoiseReport]:
    """Entry-wise minimization of the negative-eigenvalue cost.

    Each sweep visits f_1..f_n (and f_0 when its value is not known). For
    every entry a golden-section search runs along the real axis, then the
    imaginary axis, over ``+-bracket`` around the current value; a move is
    kept only when it lowers the cost, so the cost never increases. The
    first bracket is ``bracket_scale`` times the estimated noise level; later
    sweeps use ``bracket_scale`` times the largest move of the previous sweep.
    ``report.history`` holds the cost after each sweep. A purely real input
    is only searched along the real axis, so the output stays real.
    """
    opts = opts or DenoiseOptions(strategy="penalty")
    row = build_gramian(s).first_row.copy()
    report = DenoiseReport()
    if opts.f0_known is not None:
        row[0] = opts.f0_known
        first = 1
    else:
        report.f0_estimated = True
        first = 0
    f0 = max(row[0].real, 0.0)
    cost_tol = opts.cost_tol if opts.cost_tol is not None else 1e-10 * max(f0, 1e-300) ** 2

    real_input = not np.any(row.imag)
    cost = _row_cost(row)
    report.initial_cost = cost
    bracket = opts.bracket_scale * noise_level(row)
    if bracket <= 0:
        bracket = 1e-3 * max(f0, 1e-300)

    report.converged = cost <= cost_tol
    while not report.converged and report.iterations < opts.sweeps:
        max_move = 0.0
        for k in range(first, row.size):
            axes = (1.0,) if k == 0 or real_input else (1.0, 1j)
            for _ in range(opts.axis_rounds):
                for axis in axes:
                    x0 = row[k]

                    def trial(x):
                        row[k] = x0 + axis * x
                        return _row_cost(row)

                    x, c = _golden_min(trial, -bracket, bracket, opts.line_iters)
                    if c < cost:
                        row[k] = x0 + axis * x
                        cost = c
                        max_move = max(max_move, abs(x))
                    else:
                        row[k] = x0
        report.iterations += 1
        report.history.append(cost)
        report.converged = cost <= cost_tol
        if max_move == 0.0:
            break
        bracket = opts.bracket_scale * max_move
    if not report.converged:
        log.info("penalty denoising stopped after %d sweeps at cost %.3g",
                 report.iterations, cost)
    return _finish(s, HermitianToeplitz(row), report, opts.repair)


def denoise(s: SampledSignal, opts: Optional[DenoiseOptions] = None
            ) -> tuple[SampledSignal, DenoiseReport]:
    opts = opts or DenoiseOptions()
    if opts.strategy == "penalty":
        return denoise_penalty(s, opts)
    return denoise_alternating(s, opts)
