"""Text formats: signal/pole/spectrum CSV tables, run configs and reports."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .core import InvalidInputError, SampledSignal

SIGNAL_HEADER = "t,re,im"
POLE_HEADER = "omega,weight"
SPECTRUM_HEADER = "omega,re,im"
SPACING_RTOL = 1e-9


def _fmt(x: float) -> str:
    # 17 significant digits round-trip every float64
    return format(float(x), ".17g")


def _write_table(path, header: str, columns) -> None:
    lines = [header]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _read_table(path, header: str) -> np.ndarray:
    text = Path(path).read_text().splitlines()
    rows = [ln.strip() for ln in text if ln.strip()]
    if not rows or rows[0].replace(" ", "") != header:
        raise InvalidInputError(f"{path}: expected header '{header}'")
    ncol = header.count(",") + 1
    data = []
    for lineno, ln in enumerate(rows[1:], start=2):
        parts = ln.split(",")
        if len(parts) != ncol:
            raise InvalidInputError(f"{path}:{lineno}: expected {ncol} columns")
        try:
            data.append([float(p) for p in parts])
        except ValueError as exc:
            raise InvalidInputError(f"{path}:{lineno}: {exc}") from None
    if not data:
        raise InvalidInputError(f"{path}: no data rows")
    arr = np.array(data)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{path}: non-finite value")
    return arr


def write_signal(path, s: SampledSignal) -> None:
    _write_table(path, SIGNAL_HEADER, (s.times, s.values.real, s.values.imag))


def read_signal(path, default_dt: float = 1.0) -> SampledSignal:
    """Parse a ``t,re,im`` file; times must start at 0 and be equispaced."""
    arr = _read_table(path, SIGNAL_HEADER)
    t = arr[:, 0]
    if t[0] != 0.0:
        raise InvalidInputError(f"{path}: first time must be 0, got {t[0]!r}")
    if t.size == 1:
        dt = default_dt
    else:
        steps = np.diff(t)
        dt = (t[-1] - t[0]) / (t.size - 1)
        if dt <= 0 or np.any(steps <= 0):
            raise InvalidInputError(f"{path}: times must be strictly increasing")
        if np.max(np.abs(t - dt * np.arange(t.size))) > SPACING_RTOL * max(t[-1], dt):
            raise InvalidInputError(f"{path}: time grid is not uniform")
    return SampledSignal(dt, arr[:, 1] + 1j * arr[:, 2])


def write_poles(path, omegas, weights) -> None:
    _write_table(path, POLE_HEADER, (omegas, weights))


def read_poles(path) -> tuple[np.ndarray, np.ndarray]:
    arr = _read_table(path, POLE_HEADER)
    return arr[:, 0], arr[:, 1]


def write_spectrum(path, omegas, values) -> None:
    values = np.asarray(values, dtype=complex)
    _write_table(path, SPECTRUM_HEADER, (omegas, values.real, values.imag))


def read_spectrum(path) -> tuple[np.ndarray, np.ndarray]:
    arr = _read_table(path, SPECTRUM_HEADER)
    return arr[:, 0], arr[:, 1] + 1j * arr[:, 2]


def format_report(items: dict) -> str:
    """``key: value`` lines; floats at 17 significant digits."""
    lines = []
    for key, value in items.items():
        if isinstance(value, bool) or value is None:
            text = str(value).lower() if value is not None else "null"
        elif isinstance(value, (float, np.floating)):
            text = _fmt(value)
        elif isinstance(value, complex):
            text = f"{_fmt(value.real)},{_fmt(value.imag)}"
        else:
            text = str(value)
        lines.append(f"{key}: {text}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> dict:
    return yaml.safe_load(text) or {}


@dataclass
class RunConfig:
    """Every tunable of the batch pipeline; ``None`` means use the library default."""

    # time grid and model
    model: str = "dimer"
    dt: float = 0.1
    t_max: float = 10.0
    dimer_U: float = 5.0
    dimer_eps: float = 2.3
    dimer_v: float = 1.0
    dimer_beta: float = 10.0
    dimer_site: int = 0
    dimer_spin: int = 0
    ssh_n_sites: int = 8
    ssh_delta: float = 0.4
    ssh_mu: float = -3.0
    ssh_vnn: float = 1.0
    ssh_k: float = float(np.pi / 2)
    ssh_convention: str = "main_text"
    noise_sigma: float = 0.0
    noise_target: str = "both_parts"
    seed: int = 0
    # denoising
    denoise_strategy: str = "alternating"
    max_iter: int = 500
    conv_tol: Optional[float] = None
    f0_known: Optional[float] = None
    repair: bool = True
    sweeps: int = 3
    line_iters: int = 20
    axis_rounds: int = 1
    bracket_scale: float = 2.0
    cost_tol: Optional[float] = None
    # extension
    extend_strategy: str = "max_min_eig"
    n_points: Optional[int] = None
    t_end: Optional[float] = None
    grid: int = 41
    levels: int = 3
    zoom: float = 5.0
    max_levels: int = 30
    singular_tol: float = 1e-10
    rank: Optional[int] = None
    # spectrum
    tau: float = 100.0
    omega_min: Optional[float] = None
    omega_max: Optional[float] = None
    n_omega: int = 2048
    positivity_tol: Optional[float] = None

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def config_keys() -> list[str]:
    return [f.name for f in fields(RunConfig)]


def _coerce(name: str, value, annotation: str):
    if value is None:
        return None
    base = annotation.replace("Optional[", "").rstrip("]")
    try:
        if base == "float":
            return float(value)
        if base == "int":
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(f"expected an integer, got {value}")
            return int(value)
        if base == "bool":
            if isinstance(value, str):
                if value.lower() in ("true", "yes", "1"):
                    return True
                if value.lower() in ("false", "no", "0"):
                    return False
                raise ValueError(f"expected a boolean, got {value!r}")
            return bool(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"config key {name!r}: {exc}") from None


def config_from_mapping(items: dict, base: Optional[RunConfig] = None) -> RunConfig:
    """Overlay ``items`` on ``base``; unknown keys are rejected."""
    base = base or RunConfig()
    types = {f.name: str(f.type) for f in fields(RunConfig)}
    unknown = sorted(set(items) - set(types))
    if unknown:
        raise InvalidInputError(f"unknown config keys: {', '.join(unknown)}")
    return base.replace(**{k: _coerce(k, v, types[k]) for k, v in items.items()})


def load_config(path, base: Optional[RunConfig] = None) -> RunConfig:
    """Read a ``key: value`` text file (YAML mapping)."""
    try:
        items = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None
    if items is None:
        items = {}
    if not isinstance(items, dict):
        raise InvalidInputError(f"{path}: expected 'key: value' lines")
    return config_from_mapping(items, base)
