"""
Finding a hidden sinusoid
=========================

A cosine of amplitude 0.3 is buried in AR(1) noise. The raw periodogram
peaks where the noise spectrum is largest; dividing by the spectral density
first puts every frequency on the same footing, and the largest normalized
ordinate is then compared with the Gumbel law.
"""

import numpy as np

from periomax import detect_peaks, lag_window_estimate, max_test, normalize, periodogram
from periomax.processes import process_from_dict, simulate

n = 2048
model = process_from_dict({"kind": "ar1", "phi": 0.7})
x = simulate(model, n, seed=7).values

# the signal sits on the Fourier grid at index 300
t = np.arange(1, n + 1)
gamma = 2 * np.pi * 300 / n
z = x + 0.3 * np.cos(gamma * t)

pg = periodogram(z - z.mean())
print("raw periodogram peaks at index", int(np.argmax(pg.ordinates)) + 1)

# the density is estimated from the data with a Parzen lag window
fhat = lag_window_estimate(z - z.mean(), "parzen", eta=0.3)
V = normalize(pg, fhat)
report = max_test(V)
print(f"max test: statistic {report.statistic:.2f}, p-value {report.p_value:.2e}, "
      f"peak index {report.peak_index}")

# several peaks: test, remove, test again
for peak in detect_peaks(V, max_peaks=3):
    print(f"  peak at index {peak.index} (w = {peak.frequency:.4f}), p = {peak.p_value:.2e}")
