"""Zak transform on the cyclic model and for analytic windows.

For ``L = N M`` the finite transform is
``Z[n, m] = sqrt(N dt) * sum_{k<M} f[n + kN] exp(-2 pi i k m / M)``.
Row ``n`` sits at the normalized time ``n/N`` and column ``m`` at the
normalized frequency ``m/M`` of the unit cell.  When ``N dt = 1`` (for
instance ``N = sqrt(L)`` on the default grid) the prefactor is 1 and the
entries are exactly the samples of the continuum transform
``Zf(x, w) = sum_k f(x + k) exp(-2 pi i k w)`` of the periodized signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .signals import FiniteSignal, TimeGrid
from .windows import AnalyticWindow

__all__ = [
    "ZakMatrix",
    "zak_finite",
    "zak_inverse",
    "quasiperiodicity_residual",
    "zak_frame_bounds",
    "zak_continuum",
    "zak_zero_locate",
]


@dataclass(frozen=True)
class ZakMatrix:
    """Finite Zak transform on the ``N x M`` cell grid.

    ``next_row`` and ``next_col`` hold the transform evaluated directly one
    step outside the cell (at ``x = 1`` and at ``w = 1``); they are what the
    quasi-periodicity check compares against.  When absent they are
    regenerated from ``values``.
    """

    values: np.ndarray
    dt: float
    next_row: np.ndarray | None = None
    next_col: np.ndarray | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 2:
            raise ValidationError("Zak values must be a matrix", code="zak.bad_matrix")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        N, M = v.shape
        if self.next_row is None:
            object.__setattr__(self, "next_row", v[0] * np.exp(2j * np.pi * np.arange(M) / M))
        if self.next_col is None:
            object.__setattr__(self, "next_col", v[:, 0].copy())

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def M(self) -> int:
        return self.values.shape[1]

    @property
    def length(self) -> int:
        return self.N * self.M

    def cell_mass(self) -> float:
        """``sum |Z|^2 / (N M)``, equal to ``||f||^2`` by unitarity."""
        return float(np.sum(np.abs(self.values) ** 2) / (self.N * self.M))


def zak_finite(f: FiniteSignal, N: int) -> ZakMatrix:
    L = f.length
    if int(N) != N or N < 1 or L % int(N):
        raise ValidationError(f"N={N} must divide L={L}", code="zak.bad_factorization")
    N = int(N)
    M = L // N
    scale = math.sqrt(N * f.dt)
    blocks = f.values.reshape(M, N)  # blocks[k, n] = f[n + kN]
    Z = scale * np.fft.fft(blocks, axis=0).T
    # one step past the cell, straight from the definition
    next_row = scale * np.fft.fft(np.roll(f.values, -N).reshape(M, N)[:, 0])
    next_col = scale * np.sum(blocks * np.exp(-2j * np.pi * np.arange(M))[:, None], axis=0)
    return ZakMatrix(Z, f.dt, next_row, next_col)


def zak_inverse(Z: ZakMatrix) -> FiniteSignal:
    N, M = Z.N, Z.M
    scale = math.sqrt(N * Z.dt)
    blocks = np.fft.ifft(Z.values.T, axis=0) / scale
    return FiniteSignal(blocks.reshape(-1), TimeGrid(N * M, Z.dt))


def quasiperiodicity_residual(Z: ZakMatrix) -> float:
    """Max deviation from ``Z(x, w+1) = Z(x, w)`` and ``Z(x+1, w) = exp(2 pi i w) Z(x, w)``."""
    M = Z.M
    w = np.arange(M) / M
    r1 = np.max(np.abs(Z.next_row - np.exp(2j * np.pi * w) * Z.values[0]))
    r2 = np.max(np.abs(Z.next_col - Z.values[:, 0]))
    return float(max(r1, r2))


def zak_frame_bounds(g, N: int | None = None):
    """Frame report with ``A = min |Zg|^2`` and ``B = max |Zg|^2``: the bounds at the critical lattice ``a = N``, ``b = L/N``.

    Accepts a window and ``N``, or a critical separable :class:`GaborSystem`.
    """
    if N is None:
        G = g
        if G.shear or G.a * G.b != G.length:
            raise ValidationError("Zak frame bounds need a separable lattice with a*b = L",
                                  code="zak.not_critical")
        g, N = G.window, G.a
    Z = zak_finite(g, N)
    mod2 = np.abs(Z.values) ** 2
    from .gabor import _report

    return _report(mod2.min(), mod2.max(), "zak")


_UNBOUNDED = ("sinc", "s0")


def zak_continuum(g: AnalyticWindow, x, omega) -> np.ndarray:
    """``sum_k g(x + k) exp(-2 pi i k w)`` truncated to the window's effective support."""
    if g.kind in _UNBOUNDED:
        raise ValidationError(f"series tail not bounded for window kind {g.kind!r}",
                              code="zak.unbounded_tail")
    x, omega = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(omega, dtype=float))
    lo, hi = g.effective_support(1e-20)
    ks = np.arange(math.floor(lo - x.max()) - 1, math.ceil(hi - x.min()) + 2)
    out = np.zeros(x.shape, dtype=complex)
    for k in ks:
        out += g.evaluate(x + k) * np.exp(-2j * np.pi * k * omega)
    return out


def zak_zero_locate(g: AnalyticWindow, refinement: int = 64) -> tuple[tuple[float, float], float]:
    """Grid argmin of ``|Zg|`` over the unit cell and the minimal modulus.

    The cell is sampled at the centers ``((i + 1/2)/R, (j + 1/2)/R)`` so
    that jump points of discontinuous windows are never hit.
    """
    R = int(refinement)
    if R < 2:
        raise ValidationError("refinement must be at least 2", code="zak.bad_refinement")
    c = (np.arange(R) + 0.5) / R
    X, W = np.meshgrid(c, c, indexing="ij")
    mod = np.abs(zak_continuum(g, X, W))
    i, j = np.unravel_index(np.argmin(mod), mod.shape)
    return (float(c[i]), float(c[j])), float(mod[i, j])
