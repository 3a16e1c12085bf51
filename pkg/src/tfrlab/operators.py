"""Elementary operators on the cyclic model: shifts, Fourier transform, metaplectic generators."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
from scipy.signal import resample

from .errors import ValidationError
from .signals import FiniteSignal, TFPoint, TimeGrid

__all__ = [
    "grid_shift",
    "tf_shift",
    "symmetric_tf_shift",
    "fourier",
    "inverse_fourier",
    "gaussian_ft_closed_form",
    "metaplectic_generator",
    "chirp",
    "dilation",
    "fourier_J",
]


def _as_point(lam) -> TFPoint:
    return lam if isinstance(lam, TFPoint) else TFPoint(*lam)


def grid_shift(f: FiniteSignal, x: float) -> int:
    """Number of samples corresponding to a time shift; rejects off-grid shifts."""
    p = x / f.dt
    r = round(p)
    if abs(p - r) > 1e-9 * max(1.0, abs(p)):
        raise ValidationError(f"off-grid time shift: x={x} is not a multiple of dt={f.dt}",
                              code="core.off_grid_shift")
    return int(r)


def tf_shift(f: FiniteSignal, lam) -> FiniteSignal:
    """``pi(lambda) f = M_omega T_x f`` with cyclic wraparound.

    The modulation uses the centered sample times, so it is exact for any
    real ``omega``; the shift must be a whole number of samples.
    """
    lam = _as_point(lam)
    p = grid_shift(f, lam.x)
    shifted = np.roll(f.values, p)
    if lam.omega != 0:
        shifted = shifted * np.exp(2j * math.pi * lam.omega * f.grid.signed_times())
    return f.with_values(shifted)


def symmetric_tf_shift(f: FiniteSignal, lam) -> FiniteSignal:
    """``rho(lambda) = exp(-pi i x omega) pi(lambda)``."""
    lam = _as_point(lam)
    return tf_shift(f, lam) * cmath.exp(-1j * math.pi * lam.x * lam.omega)


def fourier(f: FiniteSignal) -> FiniteSignal:
    """Unitary DFT with continuum normalization.

    ``F[k] = dt * sum_n f[n] exp(-2 pi i w_k t_n)``; the result lives on the
    frequency grid with step ``1/(L dt)`` in cyclic order (index ``k`` is
    frequency ``k*dw`` taken in ``[-L/2, L/2)``).
    """
    n0 = f.grid.origin / f.dt
    if abs(n0 - round(n0)) > 1e-9:
        raise ValidationError("grid origin must be a whole number of samples for the DFT",
                              code="core.off_grid_origin")
    L = f.length
    F = f.dt * np.fft.fft(f.values)
    if round(n0):
        F = F * np.exp(-2j * math.pi * np.arange(L) * round(n0) / L)
    return FiniteSignal(F, TimeGrid(L, f.grid.dual_step, 0.0))


def inverse_fourier(F: FiniteSignal) -> FiniteSignal:
    """Inverse of :func:`fourier` for signals on an origin-0 grid."""
    L = F.length
    f = F.dt * L * np.fft.ifft(F.values)
    return FiniteSignal(f, TimeGrid(L, F.grid.dual_step, 0.0))


def gaussian_ft_closed_form(M, omega) -> complex:
    """Fourier transform of ``exp(-pi x.Mx)`` at ``omega``: ``det(M)^{-1/2} exp(-pi omega.M^{-1}omega)``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    if M.shape[0] != M.shape[1] or omega.shape != (M.shape[0],):
        raise ValidationError("M must be square and match omega", code="core.bad_shape")
    if not np.allclose(M, M.T, rtol=0, atol=1e-12 * max(1.0, np.abs(M).max())):
        raise ValidationError("M must be symmetric", code="core.not_symmetric")
    if np.linalg.eigvalsh(M).min() <= 0:
        raise ValidationError("M must be positive definite", code="core.not_positive_definite")
    return complex(np.linalg.det(M) ** -0.5 * math.exp(-math.pi * omega @ np.linalg.solve(M, omega)))


def fourier_J(f: FiniteSignal) -> FiniteSignal:
    """``J^ f = (-i)^{1/2} F f``."""
    return fourier(f) * cmath.exp(-1j * math.pi / 4)


def chirp(f: FiniteSignal, Q: float) -> FiniteSignal:
    """``V^_Q f(t) = exp(pi i Q t^2) f(t)`` at the centered sample times.

    The operator is a cyclic-model operator exactly when ``Q`` is an integer
    and ``Q*L`` is even on the symmetric grid; then it conjugates
    ``rho(x, w)`` into ``rho(x, Qx + w)``.
    """
    t = f.grid.signed_times()
    return f.with_values(f.values * np.exp(1j * math.pi * Q * t**2))


def _rational(factor: float, max_den: int = 64) -> Fraction:
    fr = Fraction(factor).limit_denominator(max_den)
    if abs(float(fr) - factor) > 1e-12 * abs(factor) or fr.numerator > 64 * max_den:
        raise ValidationError(f"dilation not grid-realizable: {factor} is not a small rational",
                              code="core.dilation_not_realizable")
    return fr


def dilation(f: FiniteSignal, factor: float) -> FiniteSignal:
    """``D^_L f(t) = i^m |L|^{-1/2} f(t/L)`` for rational ``L = p/q``.

    The centered samples are Fourier-interpolated onto a grid ``p`` times
    finer and every ``q``-th point is kept, so the result is exact for
    trigonometric polynomials and carries the aliasing error of the input
    otherwise.  Factors that are not small rationals compatible with the
    grid are rejected rather than approximated.
    """
    if factor == 0:
        raise ValidationError("dilation factor must be nonzero", code="core.dilation_not_realizable")
    fr = _rational(abs(factor))
    p, q = fr.numerator, fr.denominator
    L = f.length
    half = L // 2
    j0 = Fraction(half * p, q) - half
    if j0.denominator != 1:
        raise ValidationError(f"dilation not grid-realizable: L*p/(2q) must be an integer (L={L}, p/q={fr})",
                              code="core.dilation_not_realizable")
    centered = np.fft.fftshift(f.values)
    if factor < 0:
        centered = np.roll(centered[::-1], 1 if L % 2 == 0 else 0)
    out = resample(centered, L * p)[::q]
    j0 = int(j0)
    result = np.zeros(L, dtype=complex)
    idx = np.arange(L) + j0
    ok = (idx >= 0) & (idx < out.size)
    result[ok] = out[idx[ok]]
    phase = 1j if factor < 0 else 1.0
    result *= phase / math.sqrt(abs(factor))
    return f.with_values(np.fft.ifftshift(result))


def metaplectic_generator(kind: str, f: FiniteSignal, param=None) -> FiniteSignal:
    """Apply one of the generators ``fourier_J``, ``dilation`` (param: factor) or ``chirp`` (param: Q)."""
    if kind == "fourier_J":
        return fourier_J(f)
    if kind == "chirp":
        return chirp(f, 0.0 if param is None else float(param))
    if kind == "dilation":
        if param is None:
            raise ValidationError("dilation needs a factor", code="core.bad_generator")
        return dilation(f, float(param))
    raise ValidationError(f"unknown metaplectic generator {kind!r}", code="core.bad_generator")
