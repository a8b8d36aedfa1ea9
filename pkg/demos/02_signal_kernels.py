"""
Speed series, Fourier shifts and the gait cycle
===============================================

The building blocks under both symmetry metrics: per-frame joint speed,
a fractional circular shift done with per-coefficient phase factors, and
the autocorrelation peak that gives the cycle length.
"""

import numpy as np

from gaitsym.ingest import JointId, preprocess
from gaitsym.signal import SpeedMode, autocorrelation, dft, estimate_cycle, fractional_circular_shift, speed_series
from gaitsym.synth import generate_gait

# A cosine delayed by a quarter period becomes a sine.
print("shift [1, 0, -1, 0] by 1:", np.round(fractional_circular_shift([1, 0, -1, 0], 1), 12) + 0.0)
print("dft   [1, 0, -1, 0]     :", np.round(dft([1, 0, -1, 0]).coefficients.real, 12))

# Shifting by a quarter of the record multiplies coefficient k by (-j)^k.
x = np.random.default_rng(0).normal(size=32)
by_factor = np.fft.ifft(np.fft.fft(x) * (-1j) ** np.arange(32)).real
print("quarter-record shift matches (-j)^k:", np.allclose(fractional_circular_shift(x, 8), by_factor))

# Speed of the right ankle on a synthetic walk with a 33-frame cycle.
traj = preprocess(generate_gait(cycle_frames=33, n_strides=3, noise_std=0.5, seed=2))
v = speed_series(traj[JointId.RAnkle], SpeedMode.ABS_SUM)
r = autocorrelation(v.values)
est = estimate_cycle(v.values)
print(f"{len(v)} speed samples, cycle {est.period_frames} frames, r = {est.peak_acf:.2f}")
print("autocorrelation near the peak:", np.round(r[30:37], 2))
