"""Reconstruction of band-limited signals from uniform samples, and Poisson summation checks.

Every series reconstructor returns a :class:`Reconstruction` holding the
truncated series value and an estimate of the omitted tail.  The tail
estimate extrapolates the outermost samples with a ``(K/k)^2`` decay, which
matches the test signals used here (samples of ``sinc^2`` and of modulated
sincs decay at least that fast); it is an estimate, not a rigorous bound,
for slower-decaying sample sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from .errors import ValidationError
from .windows import AnalyticWindow

__all__ = [
    "SampleSet",
    "Reconstruction",
    "PoissonResult",
    "wkns_reconstruct",
    "bandpass_reconstruct",
    "multiband_reconstruct",
    "s0_window_reconstruct",
    "sinc_band_coefficients",
    "poisson_check",
]


@dataclass(frozen=True)
class SampleSet:
    """Samples ``f(T k)`` for ``k = k_min, ..., k_min + len(values) - 1``.

    ``band`` optionally declares the frequency interval ``(lo, hi)`` that
    contains the spectrum of ``f``.
    """

    values: np.ndarray
    T: float
    k_min: int = 0
    band: tuple[float, float] | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).ravel()
        if v.size == 0:
            raise ValidationError("sample set is empty", code="sampling.empty")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ValidationError(f"sampling period must be positive, got {self.T}", code="sampling.bad_period")
        if int(self.k_min) != self.k_min:
            raise ValidationError("k_min must be an integer", code="sampling.bad_index")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "k_min", int(self.k_min))
        if self.band is not None:
            lo, hi = (float(x) for x in self.band)
            if not lo < hi:
                raise ValidationError("band must be an interval (lo, hi) with lo < hi", code="sampling.bad_band")
            object.__setattr__(self, "band", (lo, hi))

    @property
    def k_max(self) -> int:
        return self.k_min + self.values.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def times(self) -> np.ndarray:
        return self.T * self.indices

    @classmethod
    def from_function(cls, f, T: float, K: int, band=None) -> "SampleSet":
        """Samples of ``f`` at ``T k`` for ``|k| <= K``."""
        ks = np.arange(-K, K + 1)
        return cls(np.asarray(f(T * ks), dtype=complex), T, -K, band)

    def with_values(self, values) -> "SampleSet":
        return SampleSet(values, self.T, self.k_min, self.band)


class Reconstruction(NamedTuple):
    value: complex | np.ndarray
    tail_estimate: float | np.ndarray


class PoissonResult(NamedTuple):
    lhs: complex
    rhs: complex
    difference: float
    tail_bound: float


def _check_rate(T: float, bandwidth: float):
    if not bandwidth > 0:
        raise ValidationError("bandwidth must be positive", code="sampling.bad_band")
    if T > (1 + 1e-12) / bandwidth:
        raise ValidationError(f"undersampled: no guaranteed reconstruction (T={T} > 1/B={1 / bandwidth})",
                              code="sampling.undersampled")


def _tail_estimate(s: SampleSet, u: np.ndarray, kernel_decay) -> np.ndarray:
    """Extrapolated contribution of the samples beyond both ends of the window."""
    J = 2000
    j = np.arange(1, J + 1)
    out = np.zeros(u.shape)
    vals = np.abs(s.values)
    edges = ((s.k_max, vals[-2:].max() if vals.size > 1 else vals[-1], 1),
             (s.k_min, vals[:2].max() if vals.size > 1 else vals[0], -1))
    for k_edge, amp, side in edges:
        Keff = max(abs(k_edge), 1)
        ks = k_edge + side * j
        samples = amp * (Keff / np.maximum(np.abs(ks), Keff)) ** 2
        out = out + np.sum(samples[None, :] * kernel_decay(u[:, None] - ks[None, :]), axis=1)
        # remainder beyond J terms, against a kernel decaying at least like 1/(pi d)
        out = out + amp * Keff**2 / (math.pi * J * (Keff + J))
    return out


def _sinc_decay(d):
    return np.minimum(1.0, 1.0 / (math.pi * np.maximum(np.abs(d), 1e-300)))


def _series(s: SampleSet, t, kernel, decay, band_shift: float = 0.0) -> Reconstruction:
    t = np.asarray(t, dtype=float)
    u = np.atleast_1d(t) / s.T
    d = u[:, None] - s.indices[None, :]
    terms = s.values[None, :] * kernel(d)
    if band_shift:
        terms = terms * np.exp(2j * math.pi * band_shift * s.T * d)
    value = terms.sum(axis=1)
    tail = _tail_estimate(s, u, decay)
    if t.ndim == 0:
        return Reconstruction(complex(value[0]), float(tail[0]))
    return Reconstruction(value.reshape(t.shape), tail.reshape(t.shape))


def wkns_reconstruct(s: SampleSet, t, bandwidth: float | None = None) -> Reconstruction:
    """``sum_k f(T k) sinc((t - T k)/T)``; requires ``T <= 1/B``."""
    if bandwidth is None:
        if s.band is None:
            raise ValidationError("bandwidth not given and no band declared", code="sampling.bad_band")
        lo, hi = s.band
        bandwidth = 2 * max(abs(lo), abs(hi))
    _check_rate(s.T, bandwidth)
    return _series(s, t, np.sinc, _sinc_decay)


def bandpass_reconstruct(s: SampleSet, carrier: float, t, bandwidth: float | None = None) -> Reconstruction:
    """``sum_k f(T k) sinc((t - T k)/T) exp(2 pi i w0 (t - T k))`` for a band centred at ``w0``."""
    if bandwidth is None:
        bandwidth = (s.band[1] - s.band[0]) if s.band is not None else 1.0 / s.T
    _check_rate(s.T, bandwidth)
    return _series(s, t, np.sinc, _sinc_decay, band_shift=carrier)


def multiband_reconstruct(bands, t) -> Reconstruction:
    """Sum of band-pass reconstructions over ``[(carrier, SampleSet), ...]``."""
    bands = list(bands)
    if not bands:
        raise ValidationError("empty band list", code="sampling.empty")
    parts = [bandpass_reconstruct(s, w0, t) for w0, s in bands]
    return Reconstruction(sum(p.value for p in parts), sum(p.tail_estimate for p in parts))


def sinc_band_coefficients(fhat, l: int, ks) -> np.ndarray:
    """``f_l(k) = int_{l-1/2}^{l+1/2} fhat(w) exp(2 pi i k (w - l)) dw``, i.e. ``V_sinc f(k, l)``."""
    out = []
    for k in np.atleast_1d(ks):
        re = quad(lambda w: (complex(fhat(w)) * np.exp(2j * math.pi * k * (w - l))).real,
                  l - 0.5, l + 0.5, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
        im = quad(lambda w: (complex(fhat(w)) * np.exp(2j * math.pi * k * (w - l))).imag,
                  l - 0.5, l + 0.5, epsabs=1e-14, epsrel=1e-12, limit=200)[0]
        out.append(re + 1j * im)
    return np.array(out)


def s0_window_reconstruct(s: SampleSet, g: AnalyticWindow, t) -> Reconstruction:
    """``sum_k f(T k) g((t - T k)/T)`` with a window whose spectrum is 1 on the signal band.

    Needs ``g`` of kind ``s0`` with ``edge <= 1/2`` and a declared band inside
    ``[-flat/T, flat/T]``.
    """
    if g.kind != "s0":
        raise ValidationError("s0 reconstruction needs an s0 window", code="sampling.bad_window")
    flat, edge = g.params["flat"], g.params["edge"]
    if edge > 0.5 + 1e-15:
        raise ValidationError("window spectrum must vanish outside [-1/2, 1/2]", code="sampling.bad_window")
    if s.band is None:
        raise ValidationError("s0 reconstruction needs the declared band of f", code="sampling.bad_band")
    lo, hi = s.band
    if max(abs(lo), abs(hi)) * s.T > flat * (1 + 1e-12):
        raise ValidationError(f"band of f {s.band} exceeds the flat region of the window spectrum "
                              f"(|w| <= {flat / s.T})", code="sampling.band_exceeds_window")
    d0 = edge - flat
    decay = (lambda d: np.minimum(1.0, 1.0 / (math.pi * np.abs(d) * np.maximum((2 * d0 * d) ** 2 - 1, 1e-300)))) \
        if d0 > 0 else _sinc_decay
    return _series(s, t, lambda d: g.evaluate(d), decay)


# -- Poisson summation -----------------------------------------------------------

_POISSON_KINDS = ("gaussian", "generalized_gaussian", "hermite", "sech", "twosided_exp", "s0")


def _fourier_tail(f: AnalyticWindow, K: int) -> float:
    """Bound for ``sum_{|k|>K} |fhat(k)|``."""
    if f.kind == "s0":
        edge = f.params["edge"]
        ks = np.arange(K + 1, int(math.ceil(edge)) + 2)
        return float(2 * np.abs(f.fourier(ks)).sum()) if ks.size else 0.0
    J = 4000
    ks = np.arange(K + 1, K + J + 1)
    explicit = float(np.abs(f.fourier(ks)).sum() + np.abs(f.fourier(-ks)).sum())
    end = K + J
    if f.kind == "twosided_exp":
        a = f.params["decay"]
        return explicit + 2 * 2 * a / (4 * math.pi**2 * end)
    if f.kind == "sech":
        return explicit + 2 * 2 * math.exp(-math.pi * end) / (1 - math.exp(-math.pi))
    last = max(abs(complex(f.fourier(end))), abs(complex(f.fourier(-end))))
    return explicit if last < 1e-300 else math.inf


def poisson_check(f: AnalyticWindow, t: float, K: int) -> PoissonResult:
    """Both sides of ``sum_k f(t + k) = sum_k fhat(k) exp(2 pi i k t)`` truncated to ``|k| <= K``.

    ``tail_bound`` adds the tails of the two series; windows whose Fourier
    transform decays too slowly for absolute convergence are rejected.
    """
    if f.kind not in _POISSON_KINDS:
        raise ValidationError(f"window kind {f.kind!r} fails the decay hypotheses for Poisson summation "
                              "(or has no closed-form Fourier transform)", code="sampling.poisson_hypothesis")
    if int(K) != K or K < 0:
        raise ValidationError("K must be a nonnegative integer", code="sampling.bad_truncation")
    K = int(K)
    ks = np.arange(-K, K + 1)
    lhs = complex(np.sum(f.evaluate(t + ks)))
    rhs = complex(np.sum(f.fourier(ks) * np.exp(2j * math.pi * ks * t)))
    tail = f.periodization_tail(1.0, t, K) + _fourier_tail(f, K)
    return PoissonResult(lhs, rhs, abs(lhs - rhs), float(tail))
