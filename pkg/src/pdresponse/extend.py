"""Positive definite extension of a sampled response function.

Appending ``f_{n+1} = z`` borders the Gram matrix with one row and column.
For every candidate ``z`` the smallest eigenvalue of the bordered matrix is
the smallest root of the secular equation of the arrowhead form obtained
from the eigendecomposition of the current Gram matrix, so a whole grid of
candidates costs one ``eigh`` plus vectorized bisection.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    HermitianToeplitz,
    InfeasibleError,
    InvalidInputError,
    SampledSignal,
    psd_tol,
)
from .poles import PoleModel, decompose_cf, estimate_rank, extrapolate

log = logging.getLogger(__name__)

STRATEGIES = ("max_min_eig", "central", "pole_model")


@dataclass
class ExtensionOptions:
    n_points: int = 1
    strategy: str = "max_min_eig"
    grid: int = 41
    levels: int = 3
    zoom: float = 5.0
    max_levels: int = 30          # extra refinement allowed while no feasible node is found
    singular_tol: float = 1e-10
    rank: Optional[int] = None    # pole_model: number of poles (estimated when None)
    psd_tol: Optional[float] = None

    def __post_init__(self):
        if self.n_points < 0:
            raise InvalidInputError("n_points must be >= 0")
        if self.strategy not in STRATEGIES:
            raise InvalidInputError(f"unknown strategy {self.strategy!r}")
        if self.grid < 3 or self.grid % 2 == 0:
            raise InvalidInputError("grid must be odd and >= 3 so that 0 is a node")
        if self.levels < 1 or self.max_levels < self.levels:
            raise InvalidInputError("need 1 <= levels <= max_levels")
        if not self.zoom > 1:
            raise InvalidInputError("zoom must exceed 1")


@dataclass
class ExtensionRecord:
    index: int
    value: complex
    area: float
    min_eig: float
    unique: bool


@dataclass
class ExtensionReport:
    records: list = field(default_factory=list)
    model: Optional[PoleModel] = None
    reconstruction_error: float = 0.0


class BorderedGram:
    """Smallest eigenvalue of the Gram matrix of ``row + [z]`` as a function of ``z``."""

    def __init__(self, row: np.ndarray):
        row = np.asarray(row, dtype=complex)
        self.f0 = float(row[0].real)
        self.mu, U = np.linalg.eigh(HermitianToeplitz(row).dense())
        self.U = U
        # last column of the bordered matrix: (z, f_n, ..., f_1)
        b0 = np.zeros(row.size, dtype=complex)
        b0[1:] = row[:0:-1]
        self.b0 = b0
        self.a = U.conj().T @ b0
        self.c = U[0, :].conj()

    def min_eig(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        w2 = np.abs(self.a[None, :] + self.c[None, :] * z[:, None]) ** 2
        mu = self.mu
        hi = np.full(z.size, mu[0])
        lo = min(mu[0], self.f0) - np.sqrt(w2.sum(axis=1)) - 1e-300
        scale = max(abs(mu[-1]), abs(self.f0), 1e-300)
        with np.errstate(divide="ignore", invalid="ignore"):
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                phi = self.f0 - mid - np.sum(w2 / (mu[None, :] - mid[:, None]), axis=1)
                up = phi > 0
                lo = np.where(up, mid, lo)
                hi = np.where(up, hi, mid)
                if np.all(hi - lo <= 4e-16 * scale):
                    break
        return 0.5 * (lo + hi)

    def null_space_point(self, singular_tol: float) -> Optional[complex]:
        """The completion forced by a rank-deficient Gram matrix, if any.

        A PSD completion must keep the last column in the range of the
        current matrix, i.e. orthogonal to its null space; the least-squares
        solution of that linear condition is returned.
        """
        thr = singular_tol * max(self.mu[-1], 0.0)
        null = self.mu <= thr
        if not np.any(null) or self.mu[-1] <= 0:
            return None
        c = self.c[null]
        d = self.a[null]
        cc = np.vdot(c, c).real
        if cc <= 1e-24:
            return None
        z = -np.vdot(c, d) / cc
        if abs(z) > self.f0:
            z *= self.f0 / abs(z)
        return complex(z)


def _argmax(values: np.ndarray, Z: np.ndarray) -> int:
    # largest value; ties broken by smallest (re, im)
    return int(np.lexsort((Z.imag, Z.real, -values))[0])


def _search(bg: BorderedGram, opts: ExtensionOptions, tol: float,
            seed: Optional[complex] = None):
    R = max(bg.f0, 0.0)
    half = (opts.grid - 1) // 2
    h = R / half if R > 0 else 0.0
    center = 0j
    best_z, best_val = 0j, -np.inf
    if seed is not None:
        best_z, best_val = seed, float(bg.min_eig(seed)[0])
    area = None
    centroid = None
    h_final = h
    offsets = np.arange(-half, half + 1)
    for level in range(opts.max_levels):
        xs = center.real + h * offsets
        ys = center.imag + h * offsets
        Z = (xs[None, :] + 1j * ys[:, None]).ravel()
        Z = Z[np.abs(Z) <= R * (1 + 1e-12)]
        if Z.size == 0:
            Z = np.array([center])
        vals = bg.min_eig(Z)
        i = _argmax(vals, Z)
        if vals[i] > best_val:
            best_z, best_val = complex(Z[i]), float(vals[i])
        h_final = h
        feasible = vals >= -tol
        # keep the finest level whose window contains the whole feasible set
        if feasible.any():
            on_edge = False
            if level > 0:
                edge = (np.abs(Z.real - center.real) >= (half - 0.5) * h) | \
                       (np.abs(Z.imag - center.imag) >= (half - 0.5) * h)
                on_edge = bool(np.any(feasible & edge))
            if not on_edge:
                area = float(np.count_nonzero(feasible)) * h * h
                centroid = complex(np.mean(Z[feasible]))
        center = best_z
        done = level + 1 >= opts.levels and best_val >= -tol
        if done or h == 0:
            break
        h /= opts.zoom
    return best_z, best_val, (area or 0.0), centroid, h_final


def extend_one(s: SampledSignal, opts: Optional[ExtensionOptions] = None
               ) -> tuple[complex, ExtensionRecord]:
    """Choose ``f_{n+1}`` so that the enlarged Gram matrix stays PSD.

    ``max_min_eig`` returns the grid node (or the null-space completion of a
    rank-deficient Gram matrix) maximizing the smallest eigenvalue;
    ``central`` returns the centroid of the feasible nodes; ``pole_model``
    evaluates a fitted pole model one step ahead.
    """
    opts = opts or ExtensionOptions()
    n = len(s)
    tol = opts.psd_tol if opts.psd_tol is not None else psd_tol(s.f0)
    if opts.strategy == "pole_model":
        ext, report = _extend_pole_model(s, 1, opts)
        return ext.values[n], report.records[0]

    row = s.values
    bg = BorderedGram(row)
    if bg.mu[0] < -tol:
        raise InfeasibleError(
            f"Gram matrix is not PSD (min eigenvalue {bg.mu[0]:.3g}); denoise first")
    z_null = bg.null_space_point(opts.singular_tol)
    best_z, best_val, area, centroid, h_final = _search(bg, opts, tol, seed=z_null)

    unique = area <= h_final * h_final
    value, value_eig = best_z, best_val
    if opts.strategy == "central" and centroid is not None and not unique:
        v = float(bg.min_eig(centroid)[0])
        if v >= -tol:
            value, value_eig = centroid, v
    if value_eig < -tol:
        raise InfeasibleError(
            f"no feasible extension found for index {n} (best min eigenvalue {value_eig:.3g})")
    return complex(value), ExtensionRecord(n, complex(value), area, value_eig, bool(unique))


def _extend_pole_model(s: SampledSignal, n_points: int, opts: ExtensionOptions):
    T = HermitianToeplitz(s.values)
    r = opts.rank
    if r is None:
        r = estimate_rank(T, opts.singular_tol)
    r = min(r, T.size - 1)
    model = decompose_cf(T, r, s.dt, singular_tol=opts.singular_tol)
    out = extrapolate(model, len(s) + n_points)
    report = ExtensionReport(model=model)
    report.reconstruction_error = float(np.max(np.abs(out.values[: len(s)] - s.values)))
    for j in range(len(s), len(out)):
        report.records.append(ExtensionRecord(j, complex(out.values[j]), 0.0, float("nan"), True))
    return out, report


def extend_many(s: SampledSignal, opts: Optional[ExtensionOptions] = None
                ) -> tuple[SampledSignal, ExtensionReport]:
    """Append ``opts.n_points`` samples.

    Grid strategies append one point at a time. ``pole_model`` fits a pole
    model to the whole input and returns the model's samples for every
    index, the original ones included, so the result is exactly positive
    definite; ``report.reconstruction_error`` is the largest change to an
    input sample.
    """
    opts = opts or ExtensionOptions()
    if opts.n_points == 0:
        return s, ExtensionReport()
    if opts.strategy == "pole_model":
        return _extend_pole_model(s, opts.n_points, opts)
    values = list(s.values)
    report = ExtensionReport()
    current = s
    for _ in range(opts.n_points):
        try:
            z, rec = extend_one(current, opts)
        except InfeasibleError as exc:
            raise InfeasibleError(f"extension stopped at index {len(values)}: {exc}") from exc
        values.append(z)
        report.records.append(rec)
        current = s.with_values(values)
    return current, report
