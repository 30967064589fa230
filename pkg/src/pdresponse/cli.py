"""Batch command line: ``pdresponse generate|denoise|extend|poles|spectrum``.

Every RunConfig key is also a flag (``noise_sigma`` -> ``--noise-sigma``).
Values are resolved as defaults < ``--config`` file < explicit flags.
"""
from __future__ import annotations

import sys
from dataclasses import fields
from pathlib import Path

import click
import numpy as np

from . import fileio
from .core import InvalidInputError, NumericalError, min_eigenvalue, build_gramian
from .denoise import DenoiseOptions, cost_negative_eigs, denoise
from .extend import ExtensionOptions, extend_many
from .fileio import RunConfig
from .models import (
    DimerSpec,
    NoiseSpec,
    SSHSpec,
    add_noise,
    dimer_greens,
    ssh_greens,
    time_grid,
)
from .poles import decompose_signal
from .spectrum import check_positivity, damped_ft, tail_bound

_CLICK_TYPES = {"float": float, "int": int, "str": str, "bool": str}


def _config_options(func):
    for f in reversed(fields(RunConfig)):
        base = str(f.type).replace("Optional[", "").rstrip("]")
        flag = "--" + f.name.replace("_", "-")
        func = click.option(flag, f.name, type=_CLICK_TYPES[base], default=None,
                            help=f"RunConfig key {f.name} (default {f.default!r})")(func)
    func = click.option("--config", "config_path", type=click.Path(dir_okay=False),
                        default=None, help="key: value config file")(func)
    return func


def _io_options(needs_input=True):
    def wrap(func):
        func = click.option("--report", "report_path", type=click.Path(dir_okay=False),
                            default=None, help="report file (key: value lines); stdout if absent")(func)
        func = click.option("-o", "--output", "output", type=click.Path(dir_okay=False),
                            required=True, help="output table")(func)
        if needs_input:
            func = click.option("-i", "--input", "input_path", type=click.Path(dir_okay=False),
                                required=True, help="input signal file (t,re,im)")(func)
        return func
    return wrap


def _resolve(config_path, flags) -> RunConfig:
    cfg = RunConfig()
    if config_path is not None:
        if not Path(config_path).is_file():
            raise InvalidInputError(f"config file {config_path} not found")
        cfg = fileio.load_config(config_path, cfg)
    given = {k: v for k, v in flags.items() if v is not None}
    return fileio.config_from_mapping(given, cfg)


def _emit_report(report_path, items: dict) -> None:
    text = fileio.format_report(items)
    if report_path is None:
        click.echo(text, nl=False)
    else:
        Path(report_path).write_text(text)


def _read_input(path):
    if not Path(path).is_file():
        raise InvalidInputError(f"input file {path} not found")
    return fileio.read_signal(path)


def _run(body):
    try:
        body()
    except (InvalidInputError, NumericalError, OSError) as exc:
        raise click.ClickException(str(exc)) from None


def generate_signal(cfg: RunConfig):
    times = time_grid(cfg.dt, cfg.t_max)
    if cfg.model == "dimer":
        spec = DimerSpec(cfg.dimer_U, cfg.dimer_eps, cfg.dimer_v, cfg.dimer_beta,
                         cfg.dimer_site, cfg.dimer_spin)
        s = dimer_greens(spec, times)
    elif cfg.model == "ssh":
        spec = SSHSpec(cfg.ssh_n_sites, cfg.ssh_delta, cfg.ssh_mu, cfg.ssh_vnn,
                       cfg.ssh_k, cfg.ssh_convention)
        s = ssh_greens(spec, times)
    else:
        raise InvalidInputError(f"unknown model {cfg.model!r} (dimer or ssh)")
    clean_f0 = s.f0
    s = add_noise(s, NoiseSpec(cfg.noise_sigma, cfg.seed, cfg.noise_target))
    return s, spec, clean_f0


def denoise_options(cfg: RunConfig) -> DenoiseOptions:
    return DenoiseOptions(max_iter=cfg.max_iter, conv_tol=cfg.conv_tol, f0_known=cfg.f0_known,
                          strategy=cfg.denoise_strategy, repair=cfg.repair, sweeps=cfg.sweeps,
                          line_iters=cfg.line_iters, axis_rounds=cfg.axis_rounds,
                          bracket_scale=cfg.bracket_scale, cost_tol=cfg.cost_tol)


def extension_options(cfg: RunConfig, s) -> ExtensionOptions:
    if cfg.t_end is not None:
        n_points = max(int(round(cfg.t_end / s.dt)) + 1 - len(s), 0)
    elif cfg.n_points is not None:
        n_points = cfg.n_points
    else:
        raise InvalidInputError("extend needs n_points or t_end")
    return ExtensionOptions(n_points=n_points, strategy=cfg.extend_strategy, grid=cfg.grid,
                            levels=cfg.levels, zoom=cfg.zoom, max_levels=cfg.max_levels,
                            singular_tol=cfg.singular_tol, rank=cfg.rank)


@click.group()
def main():
    """Denoise, extend and Fourier analyze positive definite response functions."""


@main.command()
@_io_options(needs_input=False)
@_config_options
def generate(output, report_path, config_path, **flags):
    """Write a model Green's function (optionally with noise) as t,re,im."""
    def body():
        cfg = _resolve(config_path, flags)
        s, spec, clean_f0 = generate_signal(cfg)
        fileio.write_signal(output, s)
        meta = {"model": cfg.model, "f0": clean_f0, "dt": s.dt, "n_samples": len(s),
                "noise_sigma": cfg.noise_sigma, "noise_target": cfg.noise_target,
                "seed": cfg.seed}
        meta.update({f"spec_{k}": v for k, v in vars(spec).items()})
        Path(str(output) + ".meta").write_text(fileio.format_report(meta))
        if report_path is not None:
            _emit_report(report_path, meta)
    _run(body)


@main.command("denoise")
@_io_options()
@_config_options
def denoise_cmd(input_path, output, report_path, config_path, **flags):
    """Project a noisy signal onto positive definite functions."""
    def body():
        cfg = _resolve(config_path, flags)
        s = _read_input(input_path)
        out, rep = denoise(s, denoise_options(cfg))
        fileio.write_signal(output, out)
        items = {"strategy": cfg.denoise_strategy, **rep.as_dict()}
        _emit_report(report_path, items)
    _run(body)


@main.command("extend")
@_io_options()
@_config_options
def extend_cmd(input_path, output, report_path, config_path, **flags):
    """Append positive definite continuation points."""
    def body():
        cfg = _resolve(config_path, flags)
        s = _read_input(input_path)
        opts = extension_options(cfg, s)
        out, rep = extend_many(s, opts)
        fileio.write_signal(output, out)
        items = {"strategy": opts.strategy, "n_input": len(s), "n_appended": len(rep.records),
                 "max_abs_value": float(np.max(np.abs(out.values))), "f0": out.f0,
                 "all_unique": all(r.unique for r in rep.records)}
        if rep.model is not None:
            items["n_poles"] = len(rep.model)
            items["reconstruction_error"] = rep.reconstruction_error
        elif rep.records:
            items["min_eigenvalue"] = min(r.min_eig for r in rep.records)
        _emit_report(report_path, items)
    _run(body)


@main.command("poles")
@_io_options()
@_config_options
def poles_cmd(input_path, output, report_path, config_path, **flags):
    """Decompose the Gram matrix into frequencies with positive weights."""
    def body():
        cfg = _resolve(config_path, flags)
        s = _read_input(input_path)
        model = decompose_signal(s, cfg.rank, cfg.singular_tol)
        fileio.write_poles(output, model.omegas, model.weights)
        _emit_report(report_path, {"n_poles": len(model), "method": model.method,
                                   "residual": model.residual,
                                   "weight_sum": float(model.weights.sum()), "f0": s.f0})
    _run(body)


@main.command("spectrum")
@_io_options()
@_config_options
def spectrum_cmd(input_path, output, report_path, config_path, **flags):
    """Damped Fourier transform plus a sign-consistency check of Re A."""
    def body():
        cfg = _resolve(config_path, flags)
        s = _read_input(input_path)
        lo = -np.pi / s.dt if cfg.omega_min is None else cfg.omega_min
        hi = np.pi / s.dt if cfg.omega_max is None else cfg.omega_max
        omegas = np.linspace(lo, hi, cfg.n_omega)
        sp = damped_ft(s, cfg.tau, omegas)
        tol = cfg.positivity_tol
        if tol is None:
            tol = tail_bound(s.f0, len(s), s.dt, cfg.tau)
        pos = check_positivity(sp, tol)
        fileio.write_spectrum(output, sp.omegas, sp.values)
        items = {"tau": cfg.tau, **pos.as_dict(),
                 "gram_min_eigenvalue": min_eigenvalue(build_gramian(s)) if len(s) <= 1000 else None,
                 "gram_cost": cost_negative_eigs(build_gramian(s)) if len(s) <= 1000 else None}
        _emit_report(report_path, items)
    _run(body)


if __name__ == "__main__":
    sys.exit(main())
