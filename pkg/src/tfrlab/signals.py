"""Finite (cyclic) signal model.

A signal of length ``L`` lives on the cyclic group Z_L.  Sample ``n`` sits at
time ``t0 + n*dt``; all shifts wrap modulo ``L``.  The default step is
``dt = 1/sqrt(L)``, which makes the frequency step ``1/(L*dt)`` equal to the
time step, so the discrete Fourier transform is a square unitary map that
treats time and frequency symmetrically.

Inner products and norms carry the Riemann weight ``dt`` so that they
approximate their continuum counterparts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = ["TimeGrid", "FiniteSignal", "TFPoint", "default_step", "inner", "norm"]


def default_step(length: int) -> float:
    """The symmetric step ``1/sqrt(L)``."""
    return 1.0 / math.sqrt(length)


@dataclass(frozen=True)
class TimeGrid:
    """Arithmetic sampling grid ``t0 + n*dt`` for ``0 <= n < length``."""

    length: int
    step: float = None
    origin: float = 0.0

    def __post_init__(self):
        if int(self.length) != self.length or self.length < 2:
            raise ValidationError(f"grid length must be an integer >= 2, got {self.length}",
                                  code="core.bad_grid")
        object.__setattr__(self, "length", int(self.length))
        if self.step is None:
            object.__setattr__(self, "step", default_step(self.length))
        if not self.step > 0:
            raise ValidationError(f"grid step must be positive, got {self.step}",
                                  code="core.bad_grid")
        object.__setattr__(self, "step", float(self.step))
        object.__setattr__(self, "origin", float(self.origin))

    @property
    def dual_step(self) -> float:
        """Frequency step ``1/(L*dt)`` of the Fourier grid."""
        return 1.0 / (self.length * self.step)

    @property
    def span(self) -> float:
        return self.length * self.step

    def times(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.length)

    def signed_index(self) -> np.ndarray:
        """Cyclic representatives of the indices in ``[-L/2, L/2)``."""
        n = np.arange(self.length)
        return (n + self.length // 2) % self.length - self.length // 2

    def signed_times(self) -> np.ndarray:
        """Times of the samples, using the centered cyclic representative.

        For ``origin == 0`` these are the points at which a periodized window
        is evaluated; they run over ``[-L*dt/2, L*dt/2)``.
        """
        return self.origin + self.step * self.signed_index()

    def frequencies(self) -> np.ndarray:
        """Signed frequencies ``k*dw`` in cyclic (FFT) order."""
        return self.dual_step * self.signed_index()


@dataclass(frozen=True)
class FiniteSignal:
    """Complex samples on a :class:`TimeGrid`; immutable."""

    values: np.ndarray
    grid: TimeGrid = field(default=None)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.ndim != 1:
            raise ValidationError("signal values must be one-dimensional", code="core.bad_signal")
        if self.grid is None:
            object.__setattr__(self, "grid", TimeGrid(v.size))
        elif self.grid.length != v.size:
            raise ValidationError(
                f"values have length {v.size} but grid has length {self.grid.length}",
                code="core.bad_signal")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def length(self) -> int:
        return self.grid.length

    @property
    def dt(self) -> float:
        return self.grid.step

    def norm(self) -> float:
        return norm(self)

    def with_values(self, values) -> "FiniteSignal":
        return FiniteSignal(values, self.grid)

    def normalized(self) -> "FiniteSignal":
        nrm = self.norm()
        if nrm == 0:
            raise ValidationError("cannot normalize the zero signal", code="core.zero_signal")
        return self.with_values(self.values / nrm)

    def reflected(self) -> "FiniteSignal":
        """The flip ``n -> -n mod L`` (sample 0 is fixed)."""
        return self.with_values(np.roll(self.values[::-1], 1))

    def conj(self) -> "FiniteSignal":
        return self.with_values(np.conj(self.values))

    def __add__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, c):
        return self.with_values(self.values * c)

    __rmul__ = __mul__

    @classmethod
    def zeros(cls, length, step=None):
        return cls(np.zeros(length, dtype=complex), TimeGrid(length, step))

    @classmethod
    def random(cls, length, rng, step=None):
        """Complex Gaussian white noise of unit norm."""
        v = rng.standard_normal(length) + 1j * rng.standard_normal(length)
        return cls(v, TimeGrid(length, step)).normalized()


@dataclass(frozen=True)
class TFPoint:
    """A point ``(x, omega)`` of the time-frequency plane."""

    x: float
    omega: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.omega)):
            raise ValidationError("time-frequency point must be finite", code="core.bad_point")

    def __iter__(self):
        return iter((self.x, self.omega))


def _check_same_grid(f, g):
    if f.grid.length != g.grid.length or not math.isclose(f.grid.step, g.grid.step, rel_tol=1e-12):
        raise ValidationError("signals live on different grids", code="core.grid_mismatch")


def inner(f: FiniteSignal, g: FiniteSignal) -> complex:
    """Weighted inner product ``dt * sum f * conj(g)`` (linear in ``f``)."""
    _check_same_grid(f, g)
    return complex(f.dt * np.vdot(g.values, f.values))


def norm(f: FiniteSignal) -> float:
    return float(np.sqrt(f.dt) * np.linalg.norm(f.values))
