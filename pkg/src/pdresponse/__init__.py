"""Positive definite response functions: denoising, extension, poles and spectra."""
from .core import (
    EigenDecomposition,
    HermitianToeplitz,
    InfeasibleError,
    InvalidInputError,
    NumericalError,
    SampledSignal,
    build_gramian,
    eig_hermitian,
    enforce_norm,
    min_eigenvalue,
    project_psd,
    project_toeplitz,
    psd_tol,
)
from .denoise import (
    DenoiseOptions,
    DenoiseReport,
    cost_negative_eigs,
    denoise,
    denoise_alternating,
    denoise_penalty,
)
from .extend import ExtensionOptions, ExtensionReport, extend_many, extend_one
from .models import (
    DimerSpec,
    NoiseSpec,
    SSHSpec,
    add_noise,
    dimer_greens,
    ssh_greens,
    time_grid,
)
from .poles import PoleModel, decompose_cf, decompose_signal, estimate_rank, extrapolate
from .spectrum import Spectrum, check_positivity, damped_ft, tail_bound

__version__ = "0.1.0"
