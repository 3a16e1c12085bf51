"""Closed-form windows with exact evaluation and, where known, exact Fourier transforms.

Fourier convention: ``F f(w) = int f(t) exp(-2 pi i w t) dt``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ValidationError
from .signals import FiniteSignal, TimeGrid

__all__ = [
    "AnalyticWindow",
    "PeriodizationResult",
    "gaussian",
    "generalized_gaussian",
    "box",
    "sinc",
    "onesided_exp",
    "twosided_exp",
    "sech",
    "hermite_window",
    "s0_window",
    "periodize",
    "hermite_function",
    "HERMITE_MAX_ORDER",
]

HERMITE_MAX_ORDER = 64

_KINDS = (
    "gaussian",
    "generalized_gaussian",
    "box",
    "sinc",
    "onesided_exp",
    "twosided_exp",
    "sech",
    "hermite",
    "s0",
)


def hermite_function(n: int, t) -> np.ndarray:
    """L2-normalized Hermite function ``h_n`` for the ``exp(-pi t^2)`` scaling.

    Built from the normalized three-term recursion, which stays stable up to
    ``n = 64``.  ``h_0`` is the standard Gaussian ``2^(1/4) exp(-pi t^2)``.
    """
    if int(n) != n or n < 0:
        raise ValidationError(f"Hermite order must be a nonnegative integer, got {n}",
                              code="bargmann.bad_order")
    if n > HERMITE_MAX_ORDER:
        raise ValidationError(f"Hermite order {n} exceeds the recursion cap {HERMITE_MAX_ORDER}",
                              code="bargmann.order_cap")
    t = np.asarray(t, dtype=float)
    u = math.sqrt(2 * math.pi) * t
    h_prev = np.zeros_like(u)
    h = 2 ** 0.25 * np.exp(-math.pi * t**2)
    for k in range(n):
        h_next = math.sqrt(2.0 / (k + 1)) * u * h - math.sqrt(k / (k + 1)) * h_prev
        h_prev, h = h, h_next
    return h


class PeriodizationResult(NamedTuple):
    value: complex
    tail_bound: float


@dataclass(frozen=True)
class AnalyticWindow:
    """A window given by a closed formula.

    ``kind`` is one of ``gaussian``, ``generalized_gaussian``, ``box``,
    ``sinc``, ``onesided_exp``, ``twosided_exp``, ``sech``, ``hermite``,
    ``s0``; ``params`` holds the kind's parameters (see the factory
    functions).  Windows are not normalized unless stated.
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"unknown window kind {self.kind!r}", code="core.bad_window")
        p = dict(self.params)
        k = self.kind
        if k == "gaussian":
            p.setdefault("scale", 1.0)
            if not p["scale"] > 0:
                raise ValidationError("gaussian scale must be positive", code="core.bad_window")
        elif k == "generalized_gaussian":
            p = {key: complex(p.get(key, default)) for key, default in
                 (("A", 1.0), ("b", 0.0), ("c", 0.0))}
            if not p["A"].real > 0:
                raise ValidationError("generalized Gaussian needs Re(A) > 0", code="core.bad_window")
        elif k in ("onesided_exp", "twosided_exp"):
            p.setdefault("decay", 1.0)
            if not p["decay"] > 0:
                raise ValidationError("exponential decay must be positive", code="core.bad_window")
        elif k == "hermite":
            n = p.get("order", 0)
            if int(n) != n or n < 0 or n > HERMITE_MAX_ORDER:
                raise ValidationError(f"Hermite order must be an integer in [0, {HERMITE_MAX_ORDER}]",
                                      code="core.bad_window")
            p["order"] = int(n)
        elif k == "s0":
            p.setdefault("flat", 0.25)
            p.setdefault("edge", 0.5)
            if not 0 < p["flat"] <= p["edge"]:
                raise ValidationError("s0 window needs 0 < flat <= edge", code="core.bad_window")
        object.__setattr__(self, "params", p)

    # -- evaluation -------------------------------------------------------

    def __call__(self, t):
        return self.evaluate(t)

    def evaluate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        k, p = self.kind, self.params
        if k == "gaussian":
            s = p["scale"]
            return ((2 * s) ** 0.25 * np.exp(-math.pi * s * t**2)).astype(complex)
        if k == "generalized_gaussian":
            return np.exp(-math.pi * p["A"] * t**2 + 2 * math.pi * p["b"] * t + p["c"])
        if k == "box":
            # midpoint value at the jumps
            a = np.abs(t)
            return np.where(a < 0.5, 1.0, np.where(a == 0.5, 0.5, 0.0)).astype(complex)
        if k == "sinc":
            return np.sinc(t).astype(complex)
        if k == "onesided_exp":
            a = p["decay"]
            out = np.where(t > 0, np.exp(-a * np.maximum(t, 0.0)), 0.0)
            return np.where(t == 0, 0.5, out).astype(complex)
        if k == "twosided_exp":
            return np.exp(-p["decay"] * np.abs(t)).astype(complex)
        if k == "sech":
            return _sech(math.pi * t).astype(complex)
        if k == "hermite":
            return hermite_function(p["order"], t).astype(complex)
        if k == "s0":
            return _s0_time(t, p["flat"], p["edge"]).astype(complex)
        raise AssertionError(k)

    def fourier(self, w) -> np.ndarray:
        """Closed-form Fourier transform; raises if none is implemented."""
        w = np.asarray(w, dtype=float)
        k, p = self.kind, self.params
        if k == "gaussian":
            s = p["scale"]
            return ((2 * s) ** 0.25 / math.sqrt(s) * np.exp(-math.pi * w**2 / s)).astype(complex)
        if k == "generalized_gaussian":
            A, b, c = p["A"], p["b"], p["c"]
            return cmath.exp(c) / np.sqrt(A) * np.exp(math.pi * (b - 1j * w) ** 2 / A)
        if k == "box":
            return np.sinc(w).astype(complex)
        if k == "sinc":
            a = np.abs(w)
            return np.where(a < 0.5, 1.0, np.where(a == 0.5, 0.5, 0.0)).astype(complex)
        if k == "onesided_exp":
            return 1.0 / (p["decay"] + 2j * math.pi * w)
        if k == "twosided_exp":
            a = p["decay"]
            return (2 * a / (a**2 + 4 * math.pi**2 * w**2)).astype(complex)
        if k == "sech":
            return _sech(math.pi * w).astype(complex)
        if k == "hermite":
            n = p["order"]
            return (-1j) ** n * hermite_function(n, w)
        if k == "s0":
            return _s0_spectrum(w, p["flat"], p["edge"]).astype(complex)
        raise AssertionError(k)

    @property
    def is_even(self) -> bool:
        if self.kind == "hermite":
            return self.params["order"] % 2 == 0
        if self.kind == "generalized_gaussian":
            return self.params["b"] == 0
        return self.kind != "onesided_exp"

    def norm(self) -> float:
        """Closed-form L2 norm."""
        k, p = self.kind, self.params
        if k in ("gaussian", "hermite"):
            return 1.0
        if k == "box":
            return 1.0
        if k == "sinc":
            return 1.0
        if k == "onesided_exp":
            return math.sqrt(1.0 / (2 * p["decay"]))
        if k == "twosided_exp":
            return math.sqrt(1.0 / p["decay"])
        if k == "sech":
            return math.sqrt(2.0 / math.pi)
        if k == "generalized_gaussian":
            A, b, c = p["A"], p["b"], p["c"]
            a = A.real
            # |f|^2 = exp(-2 pi a t^2 + 4 pi Re(b) t + 2 Re(c))
            return math.sqrt(math.exp(2 * c.real + 2 * math.pi * b.real**2 / a) / math.sqrt(2 * a))
        if k == "s0":
            w1, w2 = p["flat"], p["edge"]
            # int |g_hat|^2: flat part plus the cos^4-type rolloff
            return math.sqrt(2 * w1 + 2 * (w2 - w1) * 3.0 / 8.0)
        raise AssertionError(k)

    def effective_support(self, tol: float = 1e-18) -> tuple[float, float]:
        """Interval outside of which ``|f| < tol`` (or exactly zero)."""
        k, p = self.kind, self.params
        if k == "box":
            return (-0.5, 0.5)
        if k == "gaussian":
            r = math.sqrt(max(math.log((2 * p["scale"]) ** 0.25 / tol), 0.0) / (math.pi * p["scale"]))
            return (-r, r)
        if k == "generalized_gaussian":
            A, b, c = p["A"], p["b"], p["c"]
            a = A.real
            center = b.real / a
            peak = c.real + math.pi * b.real**2 / a
            r = math.sqrt(max(peak - math.log(tol), 0.0) / (math.pi * a))
            return (center - r, center + r)
        if k == "hermite":
            n = p["order"]
            # beyond the turning point the envelope decays like a Gaussian
            turn = math.sqrt((2 * n + 1) / (2 * math.pi))
            r = turn + math.sqrt(max(-math.log(tol), 0.0) / math.pi) + 1.0
            return (-r, r)
        if k == "onesided_exp":
            return (0.0, -math.log(tol) / p["decay"])
        if k == "twosided_exp":
            r = -math.log(tol) / p["decay"]
            return (-r, r)
        if k == "sech":
            r = math.log(2 / tol) / math.pi
            return (-r, r)
        raise ValidationError(f"window kind {k!r} has no bounded effective support",
                              code="core.unbounded_support")

    def breakpoints(self) -> tuple[float, ...]:
        """Points where the window is not smooth."""
        if self.kind == "box":
            return (-0.5, 0.5)
        if self.kind in ("onesided_exp", "twosided_exp"):
            return (0.0,)
        return ()

    # -- tails -------------------------------------------------------------

    def periodization_tail(self, alpha: float, t: float, K: int) -> float:
        """Upper bound for ``sum_{|k|>K} |f(t + alpha k)|``."""
        k, p = self.kind, self.params
        if k == "sinc":
            raise ValidationError("non-absolutely-summable periodization (sinc window)",
                                  code="core.non_summable")
        if k == "box":
            js = _outer_indices(alpha, t, K, 0.5 + alpha)
            vals = np.abs(self.evaluate(t + alpha * js))
            return float(vals.sum())
        if k in ("onesided_exp", "twosided_exp", "sech"):
            rate = p["decay"] if k != "sech" else math.pi
            amp = 2.0 if k == "sech" else 1.0
            J = 400
            js = np.concatenate([np.arange(K + 1, K + J + 1), -np.arange(K + 1, K + J + 1)])
            explicit = float(np.abs(self.evaluate(t + alpha * js)).sum())
            # remainder of the geometric majorant amp*exp(-rate|u|)
            u0 = alpha * (K + J + 1) - abs(t)
            rem = 2 * amp * math.exp(-rate * u0) / (1 - math.exp(-rate * alpha)) if u0 > 0 else math.inf
            return explicit + rem
        if k == "s0":
            J = 4000
            js = np.concatenate([np.arange(K + 1, K + J + 1), -np.arange(K + 1, K + J + 1)])
            explicit = float(np.abs(self.evaluate(t + alpha * js)).sum())
            w1, w2 = p["flat"], p["edge"]
            d = w2 - w1
            u0 = alpha * (K + J) - abs(t)
            if d == 0 or u0 <= 1.0 / d:
                raise ValidationError("s0 window tail bound needs a larger truncation",
                                      code="core.non_summable")
            # |g(u)| <= 1/(pi |u| ((2 d u)^2 - 1)), summed against an integral
            c = 1.0 / (math.pi * (4 * d * d - 1.0 / u0**2))
            rem = 2 * c / (2 * alpha * u0**2)
            return explicit + rem
        # Gaussian-type envelopes: sum until the terms underflow
        total = 0.0
        j = K + 1
        while True:
            terms = np.abs(self.evaluate(t + alpha * np.array([j, -j])))
            total += float(terms.sum())
            if (terms.max() < 1e-300 and abs(alpha * j) > abs(t) + 10) or j > K + 100000:
                break
            j += 1
        return total

    # -- sampling ----------------------------------------------------------

    def sample(self, length: int, step: float | None = None, periodize: bool | None = None,
               tol: float = 1e-16) -> FiniteSignal:
        """Sample on the cyclic grid with origin 0.

        Sample ``n`` is the window at ``n*dt`` with ``n`` taken in
        ``[-L/2, L/2)``.  With ``periodize`` (default: whenever the
        periodization converges absolutely) the window is first periodized
        with period ``L*dt`` so that the finite signal is the exact restriction
        of a periodic function.
        """
        grid = TimeGrid(length, step)
        t = grid.signed_times()
        if periodize is None:
            periodize = self.kind not in ("sinc", "s0")
        if not periodize:
            return FiniteSignal(self.evaluate(t), grid)
        if self.kind == "sinc":
            raise ValidationError("non-absolutely-summable periodization (sinc window)",
                                  code="core.non_summable")
        P = grid.span
        vals = self.evaluate(t)
        for K in range(1, 100000):
            add = self.evaluate(t + K * P) + self.evaluate(t - K * P)
            vals = vals + add
            if np.max(np.abs(add)) <= tol * max(1.0, float(np.max(np.abs(vals)))):
                break
        return FiniteSignal(vals, grid)

    # -- serialization -----------------------------------------------------

    def to_descriptor(self) -> dict:
        params = {}
        for key, v in self.params.items():
            if isinstance(v, complex):
                params[key] = [v.real, v.imag]
            else:
                params[key] = v
        return {"kind": self.kind, "params": params}

    @classmethod
    def from_descriptor(cls, desc: dict) -> "AnalyticWindow":
        if not isinstance(desc, dict) or "kind" not in desc:
            raise ValidationError("window descriptor must be an object with a 'kind'",
                                  code="core.bad_window")
        unknown = set(desc) - {"kind", "params"}
        if unknown:
            raise ValidationError(f"unknown window descriptor keys {sorted(unknown)}",
                                  code="core.bad_window")
        params = {}
        for key, v in dict(desc.get("params", {})).items():
            params[key] = complex(v[0], v[1]) if isinstance(v, (list, tuple)) else v
        return cls(desc["kind"], params)


def _sech(u):
    e = np.exp(-np.abs(u))
    return 2 * e / (1 + e * e)


def _outer_indices(alpha, t, K, reach):
    """Indices |j| > K with |t + alpha j| <= reach."""
    jmax = int(math.ceil((abs(t) + reach) / alpha)) + 1
    js = np.arange(K + 1, max(jmax, K) + 1)
    return np.concatenate([js, -js])


def _s0_spectrum(w, w1, w2):
    a = np.abs(w)
    if w2 == w1:
        return np.where(a < w1, 1.0, np.where(a == w1, 0.5, 0.0))
    roll = 0.5 * (1 + np.cos(math.pi * (a - w1) / (w2 - w1)))
    return np.where(a <= w1, 1.0, np.where(a <= w2, roll, 0.0))


def _s0_time(t, w1, w2):
    s = w1 + w2
    d = w2 - w1
    base = s * np.sinc(s * t)
    if d == 0:
        return base
    den = 1.0 - (2 * d * t) ** 2
    sing = np.isclose(den, 0.0, atol=1e-9)
    safe = np.where(sing, 1.0, den)
    shape = np.where(sing, math.pi / 4, np.cos(math.pi * d * t) / safe)
    return base * shape


# -- factories --------------------------------------------------------------

def gaussian(scale: float = 1.0) -> AnalyticWindow:
    """L2-normalized ``(2s)^(1/4) exp(-pi s t^2)``; ``gaussian(1)`` is the standard Gaussian."""
    return AnalyticWindow("gaussian", {"scale": scale})


def generalized_gaussian(A: complex = 1.0, b: complex = 0.0, c: complex = 0.0) -> AnalyticWindow:
    """``exp(-pi A t^2 + 2 pi b t + c)`` with ``Re A > 0``."""
    return AnalyticWindow("generalized_gaussian", {"A": A, "b": b, "c": c})


def box() -> AnalyticWindow:
    """Indicator of ``[-1/2, 1/2]``."""
    return AnalyticWindow("box")


def sinc() -> AnalyticWindow:
    return AnalyticWindow("sinc")


def onesided_exp(decay: float = math.pi) -> AnalyticWindow:
    return AnalyticWindow("onesided_exp", {"decay": decay})


def twosided_exp(decay: float = 1.0) -> AnalyticWindow:
    return AnalyticWindow("twosided_exp", {"decay": decay})


def sech() -> AnalyticWindow:
    """``sech(pi t)``, which is its own Fourier transform."""
    return AnalyticWindow("sech")


def hermite_window(order: int) -> AnalyticWindow:
    return AnalyticWindow("hermite", {"order": order})


def s0_window(flat: float = 0.25, edge: float = 0.5) -> AnalyticWindow:
    """Window whose spectrum is 1 on ``[-flat, flat]`` with a raised-cosine rolloff to 0 at ``edge``."""
    return AnalyticWindow("s0", {"flat": flat, "edge": edge})


def periodize(f: AnalyticWindow, alpha: float, t: float, K: int) -> PeriodizationResult:
    """Truncated periodization ``sum_{|k|<=K} f(t + alpha k)`` with a tail bound."""
    if not alpha > 0:
        raise ValidationError("period must be positive", code="core.bad_period")
    if int(K) != K or K < 0:
        raise ValidationError("truncation must be a nonnegative integer", code="core.bad_truncation")
    tail = f.periodization_tail(alpha, t, int(K))
    ks = np.arange(-K, K + 1)
    value = complex(np.sum(f.evaluate(t + alpha * ks)))
    return PeriodizationResult(value, tail)

