"""Gaussian STFT against its closed form, Wigner negativity, radar lag estimation."""

import numpy as np

from tfrlab import FiniteSignal, gaussian, hermite_window, lag_estimate, stft, tf_shift, wigner

L = 256
g = gaussian().sample(L)
V = stft(g, g)
X, W = V.mesh()
closed = np.exp(-1j * np.pi * X * W) * np.exp(-np.pi * (X**2 + W**2) / 2)
print(f"STFT of g0, L={L}: max error vs closed form {np.max(np.abs(V.values - closed)):.2e}")

h1 = hermite_window(1).sample(L)
Wh = wigner(h1)
print(f"Wigner of h1: min {Wh.values.real.min():.6f} (closed form -2), max imag {np.abs(Wh.values.imag).max():.1e}")

dt = g.dt
dw = 1 / (L * dt)
rng = np.random.default_rng(3)
chirp = FiniteSignal(np.exp(1j * np.pi * 0.3 * g.grid.signed_times() ** 2) * g.values)
for p, k in ((7, -4), (-12, 9)):
    echo = tf_shift(chirp, (p * dt, k * dw))
    echo = echo.with_values(echo.values + 0.05 * rng.standard_normal(L))
    est = lag_estimate(echo, chirp)
    print(f"true lag ({p * dt:+.4f}, {k * dw:+.4f}) -> estimate ({est.x:+.4f}, {est.omega:+.4f})")
