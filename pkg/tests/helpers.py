"""Small shared utilities for the test modules."""
import numpy as np


def rmse(a, b):
    return float(np.sqrt(np.mean(np.abs(np.asarray(a) - np.asarray(b)) ** 2)))


def random_hermitian(rng, m, scale=1.0):
    A = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return scale * (A + A.conj().T) / 2
