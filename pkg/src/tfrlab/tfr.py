"""Linear and quadratic time-frequency representations.

Everything on the finite model is built from one kernel, the STFT
``V[m,k] = dt * sum_n f[n] conj(g[n - a m]) exp(-2 pi i k n / L)``; the
ambiguity function, Wigner distribution and Rihaczek distribution are
obtained from it (or checked against it) through exact algebraic relations.
Matrices are stored with centered, strictly increasing grids.

The ``*_at`` functions evaluate the continuum transforms of analytic windows
by adaptive quadrature, for comparison against closed forms that the
discretized model only reaches up to ``O(dt)``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import ValidationError
from .operators import fourier
from .signals import FiniteSignal, TFPoint, _check_same_grid
from .windows import AnalyticWindow

__all__ = [
    "TFMatrix",
    "stft",
    "stft_direct",
    "istft",
    "spectrogram",
    "rihaczek",
    "ambiguity",
    "ambiguity_peak",
    "lag_estimate",
    "wigner",
    "symplectic_ft",
    "mixed_norm",
    "tf_inner",
    "stft_at",
    "ambiguity_at",
    "wigner_at",
    "continuum_grid",
]


@dataclass(frozen=True)
class TFMatrix:
    """Samples of a time-frequency representation.

    ``values[i, j]`` is the value at ``(x0 + i*dx, omega0 + j*domega)``.
    """

    values: np.ndarray
    x0: float
    dx: float
    omega0: float
    domega: float
    repr: str = "stft"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 2:
            raise ValidationError("TFMatrix values must be two-dimensional", code="tfr.bad_matrix")
        if not (self.dx > 0 and self.domega > 0):
            raise ValidationError("TFMatrix grids must be strictly increasing", code="tfr.bad_matrix")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        for name in ("x0", "dx", "omega0", "domega"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def shape(self):
        return self.values.shape

    @property
    def n_x(self) -> int:
        return self.values.shape[0]

    @property
    def n_omega(self) -> int:
        return self.values.shape[1]

    @property
    def x_grid(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n_x)

    @property
    def omega_grid(self) -> np.ndarray:
        return self.omega0 + self.domega * np.arange(self.n_omega)

    def index(self, x: float, omega: float) -> tuple[int, int]:
        """Indices of the grid point ``(x, omega)``; off-grid points are rejected."""
        i = (x - self.x0) / self.dx
        j = (omega - self.omega0) / self.domega
        ri, rj = round(i), round(j)
        if abs(i - ri) > 1e-8 or abs(j - rj) > 1e-8 or not (0 <= ri < self.n_x and 0 <= rj < self.n_omega):
            raise ValidationError(f"({x}, {omega}) is not a grid point", code="tfr.off_grid")
        return ri, rj

    def at(self, x: float, omega: float) -> complex:
        return complex(self.values[self.index(x, omega)])

    def with_values(self, values, repr=None, **meta) -> "TFMatrix":
        return TFMatrix(values, self.x0, self.dx, self.omega0, self.domega,
                        self.repr if repr is None else repr, {**self.meta, **meta})

    def mesh(self):
        """``(X, W)`` coordinate arrays matching ``values``."""
        return np.meshgrid(self.x_grid, self.omega_grid, indexing="ij")


def _centered_matrix(cyclic, dx, domega, repr, **meta) -> TFMatrix:
    """Wrap a matrix indexed by cyclic (FFT-order) indices into a centered TFMatrix."""
    nx, nw = cyclic.shape
    return TFMatrix(np.fft.fftshift(cyclic), -(nx // 2) * dx, dx, -(nw // 2) * domega, domega,
                    repr, dict(meta))


def _cyclic(F: TFMatrix) -> np.ndarray:
    return np.fft.ifftshift(F.values)


def _check_window(g: FiniteSignal):
    if not np.any(g.values):
        raise ValidationError("zero window", code="tfr.zero_window")


def stft(f: FiniteSignal, g: FiniteSignal, time_hop: int = 1) -> TFMatrix:
    """Short-time Fourier transform on the grid ``(a m dt, k dw)``."""
    _check_same_grid(f, g)
    _check_window(g)
    L = f.length
    a = int(time_hop)
    if a != time_hop or a < 1 or L % a:
        raise ValidationError(f"time hop {time_hop} must be a positive divisor of L={L}",
                              code="tfr.bad_hop")
    M = L // a
    idx = (np.arange(L)[None, :] - a * np.arange(M)[:, None]) % L
    prods = f.values[None, :] * np.conj(g.values)[idx]
    V = f.dt * np.fft.fft(prods, axis=1)
    return _centered_matrix(V, a * f.dt, f.grid.dual_step, "stft", hop=a)


def stft_direct(f: FiniteSignal, g: FiniteSignal, time_hop: int = 1) -> np.ndarray:
    """Brute-force O(L^2 M) evaluation in cyclic index order, used as an oracle."""
    L = f.length
    a = int(time_hop)
    M = L // a
    n = np.arange(L)
    out = np.empty((M, L), dtype=complex)
    for m in range(M):
        for k in range(L):
            out[m, k] = f.dt * np.sum(f.values * np.conj(g.values[(n - a * m) % L])
                                      * np.exp(-2j * np.pi * k * n / L))
    return out


def istft(V: TFMatrix, g: FiniteSignal, gtilde: FiniteSignal) -> FiniteSignal:
    """Inversion ``f = <gt, g>^{-1} sum V(lambda) pi(lambda) gt dx dw`` over the full grid."""
    _check_same_grid(g, gtilde)
    L = g.length
    if V.shape != (L, L) or not math.isclose(V.dx, g.dt, rel_tol=1e-12):
        raise ValidationError("istft needs the full grid (time hop 1)", code="tfr.bad_hop")
    c = g.dt * np.vdot(g.values, gtilde.values)
    if abs(c) <= 1e-12 * g.norm() * gtilde.norm():
        raise ValidationError("ill-conditioned synthesis pair: <gtilde, g> is numerically zero",
                              code="tfr.ill_conditioned_pair")
    Vc = _cyclic(V)
    # sum_k V[m,k] e^{2 pi i k n/L} dw, times dt from the outer sum; dt*dw*L = 1
    rows = np.fft.ifft(Vc, axis=1)
    n = np.arange(L)
    out = np.zeros(L, dtype=complex)
    for m in range(L):
        out += rows[m] * gtilde.values[(n - m) % L]
    return g.with_values(out / c)


def spectrogram(f: FiniteSignal, g: FiniteSignal, time_hop: int = 1) -> TFMatrix:
    nrm = g.norm()
    if abs(nrm - 1) > 1e-10:
        raise ValidationError(f"spectrogram window must have unit norm, measured {nrm!r}",
                              code="tfr.unnormalized_window")
    V = stft(f, g, time_hop)
    return V.with_values(np.abs(V.values) ** 2, repr="spectrogram")


def rihaczek(f: FiniteSignal, g: FiniteSignal) -> TFMatrix:
    """Cross-Rihaczek distribution ``f(x) conj(g^(w)) exp(-2 pi i x w)``."""
    _check_same_grid(f, g)
    L = f.length
    n = np.arange(L)
    ghat = fourier(g).values
    R = f.values[:, None] * np.conj(ghat)[None, :] * np.exp(-2j * np.pi * np.outer(n, n) / L)
    return _centered_matrix(R, f.dt, f.grid.dual_step, "rihaczek")


def ambiguity(f: FiniteSignal, g: FiniteSignal, time_hop: int = 1) -> TFMatrix:
    """Cross-ambiguity function ``exp(pi i x w) V_g f(x, w)``."""
    V = stft(f, g, time_hop)
    X, W = V.mesh()
    return V.with_values(np.exp(1j * np.pi * X * W) * V.values, repr="ambiguity")


def ambiguity_peak(f: FiniteSignal, g: FiniteSignal | None = None) -> tuple[TFPoint, float]:
    """Grid maximizer of ``|A(f, g)|`` (``g = f`` by default) and the maximal modulus."""
    if not np.any(f.values):
        raise ValidationError("ambiguity peak of the zero signal", code="tfr.zero_signal")
    A = ambiguity(f, f if g is None else g)
    mod = np.abs(A.values)
    i, j = np.unravel_index(np.argmax(mod), mod.shape)
    return TFPoint(float(A.x_grid[i]), float(A.omega_grid[j])), float(mod[i, j])


def lag_estimate(echo: FiniteSignal, f: FiniteSignal) -> TFPoint:
    """Time-frequency lag ``Delta`` maximizing ``|<echo, pi(Delta) f>|``."""
    V = stft(echo, f)
    mod = np.abs(V.values)
    i, j = np.unravel_index(np.argmax(mod), mod.shape)
    return TFPoint(float(V.x_grid[i]), float(V.omega_grid[j]))


def wigner(f: FiniteSignal, g: FiniteSignal | None = None) -> TFMatrix:
    """Cross-Wigner distribution on the half-step grid ``(n dt/2, k dw/2)``.

    Uses ``W(f,g)(x,w) = 2 exp(4 pi i x w) V_{g~} f(2x, 2w)`` with ``g~`` the
    cyclic reflection, so no interpolation is needed.  The grid covers the
    central half of the time and frequency ranges.
    """
    g = f if g is None else g
    V = stft(f, g.reflected())
    X, W = V.mesh()
    vals = 2 * np.exp(1j * np.pi * X * W) * V.values
    return TFMatrix(vals, V.x0 / 2, V.dx / 2, V.omega0 / 2, V.domega / 2, "wigner", {})


def symplectic_ft(F: TFMatrix) -> TFMatrix:
    """Symplectic Fourier transform ``int F(z') exp(-2 pi i sigma(z', z)) dz'``.

    With ``sigma(z, z') = x w' - w x'`` this is the sign for which
    ``V_g f = F_sigma R(f, g)`` and ``W(f, g) = F_sigma A(f, g)``.

    Needs a square centered grid with ``dx * domega * n = 1``; it is unitary
    and involutive on such grids.
    """
    n = F.n_x
    if F.n_omega != n:
        raise ValidationError("symplectic Fourier transform needs a square grid", code="tfr.not_square")
    if not math.isclose(F.dx * F.domega * n, 1.0, rel_tol=1e-9):
        raise ValidationError("grid steps must satisfy dx*domega*n = 1", code="tfr.not_square")
    if not (math.isclose(F.x0, -(n // 2) * F.dx, abs_tol=1e-12)
            and math.isclose(F.omega0, -(n // 2) * F.domega, abs_tol=1e-12)):
        raise ValidationError("symplectic Fourier transform needs a centered grid", code="tfr.not_square")
    # out[j, l] = (1/n) sum_{m,k} H[m,k] exp(2 pi i j k/n) exp(-2 pi i l m/n)
    H = _cyclic(F)
    out = np.fft.fft(np.fft.ifft(H, axis=1), axis=0).T
    return TFMatrix(np.fft.fftshift(out), F.x0, F.dx, F.omega0, F.domega, "symplectic_ft", {})


def tf_inner(F: TFMatrix, G: TFMatrix) -> complex:
    """Riemann-weighted inner product over the grid."""
    if F.shape != G.shape:
        raise ValidationError("TF matrices differ in shape", code="tfr.shape_mismatch")
    return complex(F.dx * F.domega * np.vdot(G.values, F.values))


def mixed_norm(F: TFMatrix, p: float = 2, q: float = 2) -> float:
    """``(int (int |F|^p dx)^{q/p} dw)^{1/q}`` with ``inf`` taken as the grid max."""
    for r in (p, q):
        if not r >= 1:
            raise ValidationError(f"mixed norm exponents must be >= 1, got {r}", code="tfr.bad_exponent")
    A = np.abs(F.values)
    if math.isinf(p):
        inner_ = A.max(axis=0)
    else:
        inner_ = (F.dx * np.sum(A**p, axis=0)) ** (1 / p)
    if math.isinf(q):
        return float(inner_.max())
    return float((F.domega * np.sum(inner_**q)) ** (1 / q))


# -- continuum evaluation for analytic windows ---------------------------------


def _fourier_integral(h, omega: float, lo: float, hi: float, pts=()) -> complex:
    """``int_lo^hi h(t) exp(-2 pi i omega t) dt`` for a complex integrand."""
    if hi <= lo:
        return 0j
    cuts = sorted({lo, hi, *[p for p in pts if lo < p < hi]})
    opts = dict(epsabs=1e-15, epsrel=1e-13, limit=400)
    w = 2 * math.pi * omega
    total = 0j
    with warnings.catch_warnings():
        # the tolerances sit at the roundoff floor on purpose
        warnings.simplefilter("ignore", IntegrationWarning)
        for a, b in zip(cuts[:-1], cuts[1:]):
            total += _piece(h, omega, w, a, b, opts)
    return total


def _piece(h, omega, w, a, b, opts) -> complex:
    hr = lambda t: complex(h(t)).real
    hi = lambda t: complex(h(t)).imag
    if omega == 0:
        return quad(hr, a, b, **opts)[0] + 1j * quad(hi, a, b, **opts)[0]
    c_r = quad(hr, a, b, weight="cos", wvar=w, **opts)[0]
    s_r = quad(hr, a, b, weight="sin", wvar=w, **opts)[0]
    c_i = quad(hi, a, b, weight="cos", wvar=w, **opts)[0]
    s_i = quad(hi, a, b, weight="sin", wvar=w, **opts)[0]
    return (c_r + s_i) + 1j * (c_i - s_r)


def _support(w: AnalyticWindow):
    try:
        return w.effective_support()
    except ValidationError:
        return (-math.inf, math.inf)


def _finite(lo, hi):
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValidationError("quadrature needs at least one window with bounded effective support",
                              code="tfr.unbounded_support")
    return lo, hi


def stft_at(f: AnalyticWindow, g: AnalyticWindow, x: float, omega: float) -> complex:
    """``V_g f(x, w) = int f(t) conj(g(t - x)) exp(-2 pi i w t) dt`` by quadrature."""
    fa, fb = _support(f)
    ga, gb = _support(g)
    lo, hi = _finite(max(fa, ga + x), min(fb, gb + x))
    pts = list(f.breakpoints()) + [p + x for p in g.breakpoints()]
    h = lambda t: complex(f.evaluate(t)) * np.conj(complex(g.evaluate(t - x)))
    return _fourier_integral(h, omega, lo, hi, pts)


def ambiguity_at(f: AnalyticWindow, g: AnalyticWindow | None, x: float, omega: float) -> complex:
    g = f if g is None else g
    return cmath.exp(1j * math.pi * x * omega) * stft_at(f, g, x, omega)


def wigner_at(f: AnalyticWindow, g: AnalyticWindow | None, x: float, omega: float) -> complex:
    """``W(f,g)(x, w) = int f(x + t/2) conj(g(x - t/2)) exp(-2 pi i w t) dt``."""
    g = f if g is None else g
    fa, fb = _support(f)
    ga, gb = _support(g)
    lo, hi = _finite(max(2 * (fa - x), 2 * (x - gb)), min(2 * (fb - x), 2 * (x - ga)))
    pts = [2 * (p - x) for p in f.breakpoints()] + [2 * (x - p) for p in g.breakpoints()]
    h = lambda t: complex(f.evaluate(x + t / 2)) * np.conj(complex(g.evaluate(x - t / 2)))
    return _fourier_integral(h, omega, lo, hi, pts)


def continuum_grid(kind: str, f: AnalyticWindow, g: AnalyticWindow | None, xs, omegas) -> TFMatrix:
    """Evaluate ``stft``, ``ambiguity`` or ``wigner`` of analytic windows on an arithmetic grid."""
    funcs = {"stft": lambda x, w: stft_at(f, f if g is None else g, x, w),
             "ambiguity": lambda x, w: ambiguity_at(f, g, x, w),
             "wigner": lambda x, w: wigner_at(f, g, x, w)}
    if kind not in funcs:
        raise ValidationError(f"unknown representation {kind!r}", code="tfr.bad_kind")
    xs = np.asarray(xs, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    if xs.size < 2 or omegas.size < 2:
        raise ValidationError("continuum grids need at least two points per axis", code="tfr.bad_grid")
    dx, dw = xs[1] - xs[0], omegas[1] - omegas[0]
    if not (np.allclose(np.diff(xs), dx) and np.allclose(np.diff(omegas), dw)):
        raise ValidationError("continuum grids must be arithmetic", code="tfr.bad_grid")
    vals = np.array([[funcs[kind](x, w) for w in omegas] for x in xs])
    return TFMatrix(vals, xs[0], dx, omegas[0], dw, kind, {"continuum": True})
