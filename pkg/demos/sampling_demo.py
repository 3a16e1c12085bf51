"""sinc^2 from samples at the Nyquist rate and at half of it; an S0 window against sinc."""

import numpy as np

from tfrlab import SampleSet, s0_window, s0_window_reconstruct, wkns_reconstruct

sinc2 = lambda t: np.sinc(t) ** 2
t = np.linspace(-5, 5, 100)
for T in (0.5, 1.0):
    r = wkns_reconstruct(SampleSet.from_function(sinc2, T, 200), t, bandwidth=1 / T)
    print(f"T={T}: max |r - sinc^2| = {np.max(np.abs(r.value - sinc2(t))):.2e}, "
          f"max |r - sinc| = {np.max(np.abs(r.value - np.sinc(t))):.2e}")

f = lambda t: np.exp(-np.pi * t**2 / 100)
t = np.linspace(-3, 3, 61)
print("\n K   sinc series   S0 series")
for K in (8, 12, 16, 20):
    s = SampleSet.from_function(f, 1.0, K, band=(-0.25, 0.25))
    e_sinc = np.max(np.abs(wkns_reconstruct(s, t, bandwidth=1.0).value - f(t)))
    e_s0 = np.max(np.abs(s0_window_reconstruct(s, s0_window(), t).value - f(t)))
    print(f"{K:>2}   {e_sinc:.2e}      {e_s0:.2e}")
