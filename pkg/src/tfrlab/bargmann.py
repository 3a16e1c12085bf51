"""Bargmann transform, Fock-space quadrature, Hermite functions and a Wigner positivity probe.

``Bf(z) = 2^{1/4} int f(t) exp(2 pi t z - pi t^2 - pi z^2 / 2) dt``.

Fock-space integrals ``int F conj(G) exp(-pi |z|^2) dz`` are computed on a
disc of radius ``R_F`` (default 4) with Gauss-Legendre nodes in the radius
and the trapezoid rule in the angle.  The mass of ``|e^{pi w* z}|^2`` outside
the disc is ``exp(-pi (R_F - |w|)^2)``-small, so reproducing-kernel
evaluations are accepted for ``|w| <= R_F / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .signals import FiniteSignal, TFPoint
from .windows import HERMITE_MAX_ORDER, AnalyticWindow, hermite_window

__all__ = [
    "BARGMANN_MAX_RADIUS",
    "bargmann",
    "bargmann_with_error",
    "FockGrid",
    "FockSample",
    "fock_samples",
    "fock_inner",
    "fock_norm",
    "reproducing_eval",
    "monomial",
    "hermite",
    "hudson_probe",
    "wigner_trapezoid",
]

BARGMANN_MAX_RADIUS = 6.0
_C = 2 ** 0.25


def _check_radius(z, radius):
    if np.max(np.abs(z)) > radius:
        raise ValidationError(f"quadrature truncation invalid for |z| > {radius}",
                              code="bargmann.radius_exceeded")


def _trapezoid_nodes(f: AnalyticWindow, z: np.ndarray):
    """Nodes and step covering the Gaussian-damped integrand for all ``z``."""
    x = z.real
    try:
        lo, hi = f.effective_support(1e-20)
    except ValidationError:
        lo, hi = -math.inf, math.inf
    r = 6.5  # exp(-pi r^2) is far below double precision
    a = max(lo, float(x.min()) - r)
    b = min(hi, float(x.max()) + r)
    band = float(np.abs(z.imag).max()) + 8.0
    if f.kind == "hermite":
        band += math.sqrt(f.params["order"])
    h = 1.0 / band
    if f.breakpoints():
        h /= 16
    n = max(int(math.ceil((b - a) / h)), 2)
    return np.linspace(a, b, n + 1)


def _kernel(t, z):
    return _C * np.exp(2 * math.pi * np.multiply.outer(z, t) - math.pi * t**2
                       - (math.pi / 2) * np.asarray(z)[..., None] ** 2)


def _bargmann_window(f: AnalyticWindow, z: np.ndarray, coarse: bool = False) -> np.ndarray:
    t = _trapezoid_nodes(f, z)
    if coarse:
        t = t[::2]
    h = t[1] - t[0]
    w = np.full(t.size, h)
    w[0] = w[-1] = h / 2
    vals = f.evaluate(t) * w
    out = np.empty(z.shape, dtype=complex)
    flat = z.ravel()
    res = out.reshape(-1)
    for s in range(0, flat.size, 512):
        res[s:s + 512] = _kernel(t, flat[s:s + 512]) @ vals
    return out


def bargmann(f, z, radius: float = BARGMANN_MAX_RADIUS):
    """Bargmann transform of an analytic window (trapezoid rule) or a finite signal (Riemann sum)."""
    z_arr = np.asarray(z, dtype=complex)
    _check_radius(z_arr, radius)
    if isinstance(f, AnalyticWindow):
        out = _bargmann_window(f, np.atleast_1d(z_arr))
    elif isinstance(f, FiniteSignal):
        t = f.grid.signed_times()
        zz = np.atleast_1d(z_arr)
        out = np.empty(zz.shape, dtype=complex)
        flat, res = zz.ravel(), out.reshape(-1)
        for s in range(0, flat.size, 512):
            res[s:s + 512] = f.dt * (_kernel(t, flat[s:s + 512]) @ f.values)
    else:
        raise ValidationError("bargmann needs an AnalyticWindow or a FiniteSignal", code="bargmann.bad_input")
    return complex(out.ravel()[0]) if z_arr.ndim == 0 else out.reshape(z_arr.shape)


def bargmann_with_error(f: AnalyticWindow, z, radius: float = BARGMANN_MAX_RADIUS):
    """Value and an error estimate from comparing against the rule with twice the step."""
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_radius(z_arr, radius)
    fine = _bargmann_window(f, z_arr)
    coarse = _bargmann_window(f, z_arr, coarse=True)
    return fine, np.abs(fine - coarse)


# -- Fock space ------------------------------------------------------------------


@dataclass(frozen=True)
class FockGrid:
    """Polar quadrature on the disc ``|z| <= radius`` for the weight ``exp(-pi |z|^2)``."""

    radius: float = 4.0
    n_radial: int = 96
    n_angular: int = 128

    def __post_init__(self):
        if not (self.radius > 0 and self.n_radial >= 2 and self.n_angular >= 2):
            raise ValidationError("bad Fock grid parameters", code="bargmann.bad_grid")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Points ``z`` and weights including ``exp(-pi |z|^2) r dr dtheta``."""
        x, wx = np.polynomial.legendre.leggauss(self.n_radial)
        r = (x + 1) * self.radius / 2
        wr = wx * self.radius / 2
        th = 2 * math.pi * np.arange(self.n_angular) / self.n_angular
        R, TH = np.meshgrid(r, th, indexing="ij")
        W = (wr * r * np.exp(-math.pi * r**2))[:, None] * (2 * math.pi / self.n_angular) * np.ones_like(TH)
        return (R * np.exp(1j * TH)).ravel(), W.ravel()


class FockSample(NamedTuple):
    z: np.ndarray
    value: np.ndarray
    weight: np.ndarray
    grid: FockGrid


def fock_samples(F, grid: FockGrid | None = None) -> FockSample:
    """Sample ``F`` on the quadrature nodes.

    ``F`` may be a window or finite signal (its Bargmann transform is taken)
    or a callable entire function.
    """
    grid = FockGrid() if grid is None else grid
    z, w = grid.nodes()
    if isinstance(F, (AnalyticWindow, FiniteSignal)):
        vals = bargmann(F, z, radius=max(grid.radius, BARGMANN_MAX_RADIUS))
    else:
        vals = np.asarray(F(z), dtype=complex)
    return FockSample(z, vals, w, grid)


def _check_grids(F: FockSample, G: FockSample):
    if F.grid != G.grid:
        raise ValidationError("Fock samples live on different grids", code="bargmann.grid_mismatch")


def fock_inner(F: FockSample, G: FockSample) -> complex:
    _check_grids(F, G)
    return complex(np.sum(F.value * np.conj(G.value) * F.weight))


def fock_norm(F: FockSample) -> float:
    return float(math.sqrt(max(fock_inner(F, F).real, 0.0)))


def reproducing_eval(F: FockSample, w: complex) -> complex:
    """``<F, K_w>`` with ``K_w(z) = exp(pi conj(w) z)``; equals ``F(w)`` for ``F`` in Fock space."""
    if abs(w) > F.grid.radius / 2:
        raise ValidationError(f"|w| must be at most {F.grid.radius / 2} for the truncated disc",
                              code="bargmann.outside_validity")
    return complex(np.sum(F.value * np.exp(math.pi * w * np.conj(F.z)) * F.weight))


def monomial(n: int):
    """Normalized Fock monomial ``e_n(z) = (pi^n / n!)^{1/2} z^n``."""
    c = math.sqrt(math.pi**n / math.factorial(n))
    return lambda z: c * np.asarray(z, dtype=complex) ** n


def hermite(n: int) -> AnalyticWindow:
    """Normalized Hermite function ``h_n`` (three-term recursion; ``n <= 64``)."""
    if int(n) != n or n < 0:
        raise ValidationError("Hermite order must be a nonnegative integer", code="bargmann.bad_order")
    if n > HERMITE_MAX_ORDER:
        raise ValidationError(f"Hermite order {n} exceeds the cap {HERMITE_MAX_ORDER}",
                              code="bargmann.order_cap")
    return hermite_window(int(n))


# -- Wigner positivity -----------------------------------------------------------


def wigner_trapezoid(f: AnalyticWindow, xs, omegas) -> np.ndarray:
    """``Wf(x, w)`` on a grid by the trapezoid rule in the lag variable (smooth windows)."""
    xs = np.asarray(xs, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    lo, hi = f.effective_support(1e-20)
    band = float(np.abs(omegas).max()) + 8.0
    if f.kind == "hermite":
        band += math.sqrt(f.params["order"])
    h = 1.0 / (2 * band)
    out = np.empty((xs.size, omegas.size))
    for i, x in enumerate(xs):
        a = max(2 * (lo - x), 2 * (x - hi))
        b = min(2 * (hi - x), 2 * (x - lo))
        if b <= a:
            out[i] = 0.0
            continue
        t = np.linspace(a, b, max(int(math.ceil((b - a) / h)), 2) + 1)
        step = t[1] - t[0]
        w = np.full(t.size, step)
        w[0] = w[-1] = step / 2
        integrand = f.evaluate(x + t / 2) * np.conj(f.evaluate(x - t / 2)) * w
        out[i] = (np.exp(-2j * math.pi * np.outer(omegas, t)) @ integrand).real
    return out


def hudson_probe(f: AnalyticWindow, grid=None) -> tuple[float, TFPoint]:
    """Minimum of ``Wf`` over a grid and where it is attained.

    ``grid`` is ``(xs, omegas)``; the default is 33 x 33 points on
    ``[-1, 1]^2``, small enough that the Wigner distribution of a
    generalized Gaussian stays well above the cancellation noise of the lag
    integral (about 1e-18).  Windows with jumps are evaluated by adaptive
    quadrature.
    """
    if grid is None:
        xs = omegas = np.linspace(-1, 1, 33)
    else:
        xs, omegas = (np.asarray(v, dtype=float) for v in grid)
    if f.breakpoints():
        from .tfr import wigner_at

        W = np.array([[wigner_at(f, None, x, w).real for w in omegas] for x in xs])
    else:
        W = wigner_trapezoid(f, xs, omegas)
    i, j = np.unravel_index(np.argmin(W), W.shape)
    return float(W[i, j]), TFPoint(float(xs[i]), float(omegas[j]))
