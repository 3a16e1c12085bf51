"""Frame bounds of the periodized Gaussian over lattices a x b on the L = 144 grid."""

import numpy as np

from tfrlab import divisors, frame_set_scan, gaussian, zak_frame_bounds

L = 144
g = gaussian().sample(L)
ds = divisors(L)
rows = frame_set_scan(g, [(a, b) for a in ds for b in ds if 2 <= a <= 24 and 2 <= b <= 24])
print(f"{'a':>3} {'b':>3} {'density':>8} {'A':>10} {'B':>10} {'B/A':>10}")
for r in rows:
    if r.a * r.b <= 2 * L:
        print(f"{r.a:>3} {r.b:>3} {float(r.density):>8.3f} {r.A:>10.3e} {r.B:>10.3e} {r.condition:>10.3g}")

print("\ncritical density, min |Zg|^2 as L grows")
for n in (5, 6, 7, 8, 9, 10, 11, 12):
    print(f"L={n * n:>4}: {zak_frame_bounds(gaussian().sample(n * n), n).A:.3e}")
