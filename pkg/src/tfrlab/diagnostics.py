"""Uncertainty-principle checks and amalgam norms on the cyclic model.

Position moments use the centered sample times; momentum uses the spectral
multiplier ``omega`` on the centered frequency grid, so ``||(P - b) f||`` is
``||(omega - b) f^||``.  Set measures are counts times ``dt`` (time),
``dw`` (frequency) or ``dt*dw`` (time-frequency cells).
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .operators import fourier
from .signals import FiniteSignal, _check_same_grid
from .tfr import stft

__all__ = [
    "hpw_product",
    "donoho_stark_check",
    "DonohoStark",
    "weak_up_stft",
    "lieb_check",
    "lieb_holds",
    "amalgam_norm",
]


def _nonzero(f: FiniteSignal):
    if not np.any(f.values):
        raise ValidationError("diagnostic undefined for the zero signal", code="diagnostics.zero_signal")


def hpw_product(f: FiniteSignal, a: float = 0.0, b: float = 0.0) -> tuple[float, float]:
    """``(||(X - a) f|| * ||(P - b) f||, ||f||^2 / (4 pi))``; the first is never below the second."""
    _nonzero(f)
    t = f.grid.signed_times()
    w = f.grid.frequencies()
    F = fourier(f)
    x_spread = math.sqrt(f.dt) * np.linalg.norm((t - a) * f.values)
    w_spread = math.sqrt(F.dt) * np.linalg.norm((w - b) * F.values)
    return float(x_spread * w_spread), float(f.norm() ** 2 / (4 * math.pi))


class DonohoStark(NamedTuple):
    eps_T: float
    eps_Omega: float
    slack: float


def _mask(sel, L: int) -> np.ndarray:
    sel = np.asarray(sel)
    if sel.dtype == bool:
        if sel.shape != (L,):
            raise ValidationError(f"mask must have length {L}", code="diagnostics.bad_set")
        return sel
    m = np.zeros(L, dtype=bool)
    m[np.asarray(sel, dtype=int) % L] = True
    return m


def donoho_stark_check(f: FiniteSignal, T_set, Omega_set) -> DonohoStark:
    """Concentration defects and the slack ``|T| |Omega| - (1 - eps_T - eps_Omega)^2``.

    ``T_set`` indexes samples and ``Omega_set`` indexes DFT bins (cyclic
    order); either may be a boolean mask or an index list.
    """
    _nonzero(f)
    L = f.length
    T = _mask(T_set, L)
    Om = _mask(Omega_set, L)
    F = fourier(f)
    nrm = f.norm()
    eps_T = math.sqrt(f.dt) * np.linalg.norm(f.values[~T]) / nrm
    eps_O = math.sqrt(F.dt) * np.linalg.norm(F.values[~Om]) / nrm
    measure = T.sum() * f.dt * Om.sum() * F.dt
    return DonohoStark(float(eps_T), float(eps_O), float(measure - (1 - eps_T - eps_O) ** 2))


def weak_up_stft(f: FiniteSignal, g: FiniteSignal, U) -> tuple[float, float]:
    """``(mass of |V_g f|^2 on U, |U|)`` for unit-norm ``f`` and ``g``.

    ``U`` is a boolean mask over the centered STFT grid (full time hop),
    or a callable ``(X, W) -> mask``.
    """
    _check_same_grid(f, g)
    for name, s in (("f", f), ("g", g)):
        if abs(s.norm() - 1) > 1e-10:
            raise ValidationError(f"{name} must have unit norm, measured {s.norm()!r}",
                                  code="diagnostics.unnormalized")
    V = stft(f, g)
    mask = np.asarray(U(*V.mesh()) if callable(U) else U, dtype=bool)
    if mask.shape != V.shape:
        raise ValidationError(f"U must have shape {V.shape}", code="diagnostics.bad_set")
    cell = V.dx * V.domega
    return float(np.sum(np.abs(V.values[mask]) ** 2) * cell), float(mask.sum() * cell)


def lieb_check(f: FiniteSignal, g: FiniteSignal, p: float) -> tuple[float, float]:
    """``(int |V_g f|^p, (2/p) (||f|| ||g||)^p)`` over the full grid."""
    if not p >= 1:
        raise ValidationError("Lieb exponent must be at least 1", code="diagnostics.bad_exponent")
    V = stft(f, g)
    lhs = float(np.sum(np.abs(V.values) ** p) * V.dx * V.domega)
    return lhs, float((2.0 / p) * (f.norm() * g.norm()) ** p)


def lieb_holds(lhs: float, rhs: float, p: float, slack: float = 1e-6) -> bool:
    """Direction check: ``lhs <= rhs`` for ``p >= 2`` and ``lhs >= rhs`` for ``1 <= p <= 2``."""
    tol = slack * max(abs(rhs), 1.0)
    if p > 2:
        return lhs <= rhs + tol
    if p < 2:
        return lhs >= rhs - tol
    return abs(lhs - rhs) <= tol


def amalgam_norm(f: FiniteSignal, block: int) -> float:
    """``sum over blocks of max |f|`` with blocks of ``block`` consecutive samples."""
    L = f.length
    if int(block) != block or block < 1 or L % int(block):
        raise ValidationError(f"block {block} must divide L={L}", code="diagnostics.bad_block")
    return float(np.abs(f.values).reshape(-1, int(block)).max(axis=1).sum())
