"""Reading off excitation energies from the Gram matrix.

A positive semidefinite Toeplitz matrix of rank r is a sum of r sampled
oscillations with positive weights. Recovering them gives the transition
energies and spectral weights of the dimer, which can be compared with the
exact Lehmann representation, and lets us continue the signal to any time.
"""
import numpy as np

from pdresponse import (
    DimerSpec,
    build_gramian,
    decompose_signal,
    dimer_greens,
    estimate_rank,
    extrapolate,
    time_grid,
)
from pdresponse.models import solve_dimer

signal = dimer_greens(DimerSpec(), time_grid(0.1, 10.0))
print(f"numerical rank of the 101x101 Gram matrix: {estimate_rank(build_gramian(signal))}")

model = decompose_signal(signal)
ed_omegas, ed_weights = solve_dimer(DimerSpec()).poles()
print(f"\n{'omega':>12s} {'exact':>12s} {'weight':>12s} {'exact':>12s}")
for w, we, p, pe in zip(model.omegas, ed_omegas, model.weights, ed_weights):
    print(f"{w:12.8f} {we:12.8f} {p:12.8f} {pe:12.8f}")
print(f"sum of weights {model.weights.sum():.10f} vs f0 {signal.f0:.10f}")

far = extrapolate(model, 1001)
exact_far = dimer_greens(DimerSpec(), time_grid(0.1, 100.0))
print(f"\nextrapolated to t=100: |error| = {abs(far.values[-1] - exact_far.values[-1]):.1e}")
