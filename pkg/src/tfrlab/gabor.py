"""Gabor systems on the cyclic model.

A system is a window ``g`` and the lattice of time-frequency shifts
``(a m, b k + c m)`` measured in samples and DFT bins; ``c`` is an integer
shear (zero for separable lattices).  The adjoint lattice is generated by
``(L/b, L c/(a b))`` and ``(0, L/a)``; for ``c = 0`` it is
``(L/b)Z x (L/a)Z``.  The lattice volume is ``a b / L`` in time-frequency
units, so the density is ``L / (a b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg, eigsh

from .errors import NumericalError, ValidationError
from .operators import chirp, fourier_J
from .signals import FiniteSignal, _check_same_grid

__all__ = [
    "GaborSystem",
    "FrameReport",
    "DENSE_MAX_LENGTH",
    "FRAME_TOL",
    "frame_operator_apply",
    "frame_operator_matrix",
    "frame_bounds",
    "cg_solve",
    "frame_algorithm",
    "canonical_dual",
    "tight_window",
    "analysis",
    "synthesis",
    "wexler_raz_residual",
    "figa_check",
    "tolimieri_orr_bound",
    "janssen_lower_bound",
    "frame_set_scan",
    "ScanRow",
    "divisors",
]

DENSE_MAX_LENGTH = 512
FRAME_TOL = 1e-8


@dataclass(frozen=True)
class GaborSystem:
    window: FiniteSignal
    a: int
    b: int
    shear: int = 0

    def __post_init__(self):
        L = self.window.length
        for name in ("a", "b"):
            v = getattr(self, name)
            if int(v) != v or v < 1 or L % int(v):
                raise ValidationError(f"{name}={v} must be a positive divisor of L={L}",
                                      code="gabor.bad_lattice")
            object.__setattr__(self, name, int(v))
        c = int(self.shear)
        if c != self.shear:
            raise ValidationError("shear must be an integer number of bins", code="gabor.bad_lattice")
        object.__setattr__(self, "shear", c % L)
        if (self.shear * (L // self.a)) % self.b:
            raise ValidationError("sheared lattice does not close on the cyclic grid",
                                  code="gabor.bad_lattice")

    @property
    def length(self) -> int:
        return self.window.length

    @property
    def n_atoms(self) -> int:
        return (self.length // self.a) * (self.length // self.b)

    @property
    def volume(self) -> float:
        return self.a * self.b / self.length

    @property
    def density(self) -> float:
        return self.length / (self.a * self.b)

    def with_window(self, g: FiniteSignal) -> "GaborSystem":
        return GaborSystem(g, self.a, self.b, self.shear)

    def lattice_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Sample and bin indices of all atoms, in ``[0, L)``."""
        L, a, b, c = self.length, self.a, self.b, self.shear
        m, k = np.meshgrid(np.arange(L // a), np.arange(L // b), indexing="ij")
        return (a * m).ravel(), ((b * k + c * m) % L).ravel()

    def adjoint_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Sample and bin indices of the adjoint lattice, in ``[0, L)``."""
        L, a, b, c = self.length, self.a, self.b, self.shear
        m, k = np.meshgrid(np.arange(b), np.arange(a), indexing="ij")
        return ((L // b) * m).ravel(), ((L * c // (a * b)) * m + (L // a) * k).ravel() % L

    def atom(self, time_index: int, bin_index: int) -> FiniteSignal:
        L = self.length
        n = np.arange(L)
        return self.window.with_values(np.roll(self.window.values, time_index)
                                       * np.exp(2j * np.pi * bin_index * n / L))

    def transformed(self, generator: str, Q: int = 0) -> "GaborSystem":
        """Image of the system under ``fourier_J`` or the chirp ``V_Q``.

        Both maps send the lattice to a lattice of the same kind and leave the
        frame bounds unchanged.  The chirp needs the default step and an
        integer ``Q`` with ``Q L`` even.
        """
        L = self.length
        if generator == "fourier_J":
            if self.shear or not math.isclose(self.window.dt, 1 / math.sqrt(L)):
                raise ValidationError("fourier_J image needs a separable lattice on the default grid",
                                      code="gabor.bad_generator")
            return GaborSystem(fourier_J(self.window), self.b, self.a)
        if generator == "chirp":
            if int(Q) != Q or (Q * L) % 2 or not math.isclose(self.window.dt, 1 / math.sqrt(L)):
                raise ValidationError("chirp image needs integer Q with Q*L even on the default grid",
                                      code="gabor.bad_generator")
            return GaborSystem(chirp(self.window, Q), self.a, self.b, self.shear + int(Q) * self.a)
        raise ValidationError(f"unknown generator {generator!r}", code="gabor.bad_generator")


@dataclass(frozen=True)
class FrameReport:
    A: float
    B: float
    condition: float
    method: str

    @property
    def is_frame(self) -> bool:
        return math.isfinite(self.condition)


def _report(A: float, B: float, method: str) -> FrameReport:
    A = max(float(A), 0.0)
    B = max(float(B), 0.0)
    if B == 0 or A < FRAME_TOL * B:
        return FrameReport(A, B, math.inf, method)
    return FrameReport(A, B, B / A, method)


# -- frame operator ------------------------------------------------------------


def _shifted_windows(G: GaborSystem) -> np.ndarray:
    L, a = G.length, G.a
    idx = (np.arange(L)[None, :] - a * np.arange(L // a)[:, None]) % L
    return G.window.values[idx]


def frame_operator_apply(G: GaborSystem, f: FiniteSignal) -> FiniteSignal:
    """``S f = sum_lambda <f, pi(lambda) g> pi(lambda) g`` in Walnut form.

    The sum over the ``L/b`` frequencies of each time slice collapses to a
    periodization with period ``p = L/b``, so the cost is ``O(L^2/a)``.
    """
    _check_same_grid(f, G.window)
    L, a, b, c = G.length, G.a, G.b, G.shear
    p = L // b
    Gm = _shifted_windows(G)
    M = Gm.shape[0]
    U = (f.values[None, :] * np.conj(Gm)).reshape(M, b, p)
    s = np.arange(b)
    W = np.exp(-2j * np.pi * np.outer(c * np.arange(M), s) / b)
    T = np.einsum("msr,ms->mr", U, W)
    out = np.einsum("mn,mn->n", Gm, (np.conj(W)[:, :, None] * T[:, None, :]).reshape(M, L))
    return f.with_values(f.dt * p * out)


def frame_operator_matrix(G: GaborSystem) -> np.ndarray:
    """Dense ``L x L`` frame operator, ``S[n, n']`` acting on sample vectors."""
    L, a, b, c = G.length, G.a, G.b, G.shear
    if L > 4 * DENSE_MAX_LENGTH:
        raise ValidationError(f"dense assembly is capped at L={4 * DENSE_MAX_LENGTH}",
                              code="gabor.dense_cap")
    p = L // b
    n = np.arange(L)
    C = _shifted_windows(G) * np.exp(2j * np.pi * np.outer(c * np.arange(L // a), n) / L)
    mask = ((n[:, None] - n[None, :]) % p) == 0
    return G.window.dt * p * (C.T @ np.conj(C)) * mask


def _operator(G: GaborSystem) -> LinearOperator:
    L = G.length
    return LinearOperator((L, L), matvec=lambda v: frame_operator_apply(
        G, G.window.with_values(np.ravel(v))).values, dtype=complex)


def cg_solve(G: GaborSystem, h: FiniteSignal, rtol: float = 1e-10, max_iter: int | None = None) -> FiniteSignal:
    """Solve ``S x = h`` by conjugate gradients; non-convergence is an error."""
    L = G.length
    max_iter = 10 * L if max_iter is None else max_iter
    x, info = cg(_operator(G), h.values, rtol=rtol, atol=0.0, maxiter=max_iter)
    res = np.linalg.norm(frame_operator_apply(G, h.with_values(x)).values - h.values)
    ref = np.linalg.norm(h.values)
    if info != 0 or res > 10 * rtol * ref:
        raise NumericalError(f"conjugate gradients did not converge: relative residual {res / ref:.3e}",
                             code="gabor.cg_failed")
    return h.with_values(x)


def frame_algorithm(G: GaborSystem, h: FiniteSignal, A: float, B: float,
                    rtol: float = 1e-10, max_iter: int = 10000) -> FiniteSignal:
    """Neumann-series inversion ``x <- x + 2/(A+B) (h - S x)`` of the frame operator.

    Converges geometrically with ratio ``(B-A)/(B+A)`` given valid frame bounds.
    """
    if not 0 < A <= B:
        raise ValidationError("frame algorithm needs bounds 0 < A <= B", code="gabor.bad_bounds")
    lam = 2.0 / (A + B)
    x = np.zeros(G.length, dtype=complex)
    ref = np.linalg.norm(h.values)
    for _ in range(max_iter):
        r = h.values - frame_operator_apply(G, h.with_values(x)).values
        if np.linalg.norm(r) <= rtol * ref:
            return h.with_values(x)
        x = x + lam * r
    raise NumericalError(f"frame algorithm did not converge in {max_iter} iterations "
                         f"(relative residual {np.linalg.norm(r) / ref:.3e})", code="gabor.neumann_failed")


def frame_bounds(G: GaborSystem, method: str = "dense") -> FrameReport:
    """Optimal frame bounds ``lambda_min(S)`` and ``lambda_max(S)``.

    ``dense``: Hermitian eigensolve of the assembled operator (L <= 512).
    ``iterative``: Lanczos on ``S`` for ``B``, Lanczos on ``B - S`` to detect a
    vanishing lower bound, then shift-invert with conjugate-gradient solves
    for ``A``.  ``zak``: multiplication by ``|Zg|^2`` at critical density.
    """
    L = G.length
    if method == "dense":
        if L > DENSE_MAX_LENGTH:
            raise ValidationError(f"dense eigensolve is capped at L={DENSE_MAX_LENGTH}",
                                  code="gabor.dense_cap")
        ev = np.linalg.eigvalsh(frame_operator_matrix(G))
        return _report(ev[0], ev[-1], "dense_eig")
    if method == "iterative":
        return _iterative_bounds(G)
    if method == "zak":
        from .zak import zak_frame_bounds

        return zak_frame_bounds(G)
    raise ValidationError(f"unknown frame-bound method {method!r}", code="gabor.bad_method")


def _iterative_bounds(G: GaborSystem) -> FrameReport:
    L = G.length
    S = _operator(G)
    v0 = np.random.default_rng(0).standard_normal(L).astype(complex)
    opts = dict(k=1, v0=v0, tol=1e-13, maxiter=100 * L)
    try:
        if not np.any(G.window.values):
            return _report(0.0, 0.0, "iterative")
        B = float(eigsh(S, which="LA", return_eigenvectors=False, **opts)[0])
        shifted = LinearOperator((L, L), matvec=lambda v: B * np.ravel(v) - S.matvec(v), dtype=complex)
        A0 = B - float(eigsh(shifted, which="LA", return_eigenvectors=False, **opts)[0])
        if A0 < 100 * FRAME_TOL * B:
            return _report(A0, B, "iterative")

        def solve(v):
            return cg_solve(G, G.window.with_values(np.ravel(v))).values

        inv = LinearOperator((L, L), matvec=solve, dtype=complex)
        A = float(eigsh(S, sigma=0.0, OPinv=inv, which="LM", return_eigenvectors=False, **opts)[0].real)
    except NumericalError:
        raise
    except Exception as exc:  # ARPACK non-convergence
        raise NumericalError(f"iterative eigensolver failed: {exc}", code="gabor.eig_failed") from exc
    return _report(A, B, "iterative")


def _require_frame(G: GaborSystem) -> FrameReport:
    rep = frame_bounds(G, "dense" if G.length <= DENSE_MAX_LENGTH else "iterative")
    if not rep.is_frame:
        raise NumericalError(f"lower frame bound ≈ 0 (A={rep.A:.3e}, B={rep.B:.3e}): not a frame",
                             code="gabor.not_a_frame")
    return rep


def canonical_dual(G: GaborSystem, check: bool = True) -> FiniteSignal:
    """``S^{-1} g`` by conjugate gradients."""
    if check:
        _require_frame(G)
    return cg_solve(G, G.window)


def tight_window(G: GaborSystem) -> FiniteSignal:
    """``S^{-1/2} g`` from the Hermitian eigendecomposition of ``S``."""
    if G.length > 4 * DENSE_MAX_LENGTH:
        raise ValidationError(f"tight window uses a dense eigensolve, capped at L={4 * DENSE_MAX_LENGTH}",
                              code="gabor.dense_cap")
    w, U = np.linalg.eigh(frame_operator_matrix(G))
    if w[0] < FRAME_TOL * w[-1]:
        raise NumericalError(f"lower frame bound ≈ 0 (A={w[0]:.3e}, B={w[-1]:.3e}): not a frame",
                             code="gabor.not_a_frame")
    return G.window.with_values(U @ ((U.conj().T @ G.window.values) / np.sqrt(w)))


# -- coefficients ----------------------------------------------------------------


def _stft_points(f: FiniteSignal, g: FiniteSignal, ti: np.ndarray, fi: np.ndarray) -> np.ndarray:
    """``V_g f`` at the given (sample, bin) index pairs."""
    L = f.length
    out = np.empty(ti.size, dtype=complex)
    for t in np.unique(ti):
        sel = ti == t
        col = f.dt * np.fft.fft(f.values * np.conj(np.roll(g.values, int(t))))
        out[sel] = col[fi[sel]]
    return out


def analysis(G: GaborSystem, f: FiniteSignal) -> np.ndarray:
    """Coefficients ``<f, pi(lambda) g>`` in the order of :meth:`GaborSystem.lattice_points`."""
    return _stft_points(f, G.window, *G.lattice_points())


def synthesis(G: GaborSystem, coeffs) -> FiniteSignal:
    """``sum_lambda c_lambda pi(lambda) g``."""
    L, a = G.length, G.a
    ti, fi = G.lattice_points()
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != ti.shape:
        raise ValidationError(f"expected {ti.size} coefficients", code="gabor.bad_coefficients")
    out = np.zeros(L, dtype=complex)
    for t in np.unique(ti):
        sel = ti == t
        spec = np.zeros(L, dtype=complex)
        np.add.at(spec, fi[sel], coeffs[sel])
        out += np.fft.ifft(spec) * L * np.roll(G.window.values, int(t))
    return G.window.with_values(out)


def wexler_raz_residual(g: FiniteSignal, gtilde: FiniteSignal, G: GaborSystem) -> float:
    """``max |<gt, pi(l°) g> - vol delta_{l°,0}|`` over the adjoint lattice."""
    ti, fi = G.adjoint_points()
    vals = _stft_points(gtilde, g, ti, fi)
    target = np.where((ti == 0) & (fi == 0), G.volume, 0.0)
    return float(np.max(np.abs(vals - target)))


def figa_check(f, h, g, gtilde, G: GaborSystem) -> tuple[complex, complex]:
    """Both sides of ``sum_L V_g f conj(V_gt h) = vol^-1 sum_L° V_g gt conj(V_f h)``."""
    ti, fi = G.lattice_points()
    lhs = np.sum(_stft_points(f, g, ti, fi) * np.conj(_stft_points(h, gtilde, ti, fi)))
    ai, af = G.adjoint_points()
    rhs = np.sum(_stft_points(gtilde, g, ai, af) * np.conj(_stft_points(h, f, ai, af))) / G.volume
    return complex(lhs), complex(rhs)


def tolimieri_orr_bound(G: GaborSystem) -> tuple[float, float]:
    """``(sum_L |V_g g|^2 / ||g||^2, vol^-1 sum_L° |V_g g|)``; brackets the optimal upper bound."""
    g = G.window
    nrm2 = g.norm() ** 2
    if nrm2 == 0:
        return 0.0, 0.0
    low = np.sum(np.abs(_stft_points(g, g, *G.lattice_points())) ** 2) / nrm2
    high = np.sum(np.abs(_stft_points(g, g, *G.adjoint_points()))) / G.volume
    return float(low), float(high)


def _signed(i: np.ndarray, L: int) -> np.ndarray:
    return (i + L // 2) % L - L // 2


def janssen_lower_bound(G: GaborSystem) -> float:
    """Lower frame bound from the Janssen representation at even integer density.

    At density ``L/(ab) = 2, 4, ...`` the symmetric shifts ``rho`` along the
    adjoint lattice commute and form a group representation, so ``S`` is
    diagonalized by its characters ``exp(2 pi i sigma(l°, z))``.  The
    minimum over ``z`` in the fundamental cell of the lattice of
    ``vol^-1 sum_l° A g(l°) exp(2 pi i sigma(l°, z))`` is the optimal lower bound.
    """
    L = G.length
    q, r = divmod(L, G.a * G.b)
    if r or q % 2 or G.shear:
        raise ValidationError("hypothesis of the cited result not met: the lattice must be separable "
                              "with even integer density", code="gabor.janssen_hypothesis")
    g = G.window
    ti, fi = G.adjoint_points()
    st, sf = _signed(ti, L), _signed(fi, L)
    Ag = np.exp(1j * np.pi * st * sf / L) * _stft_points(g, g, ti, fi)
    zt, zf = np.meshgrid(np.arange(G.a), np.arange(G.b), indexing="ij")
    # sigma(l°, z) = (t° z_w - w° z_t) in units of dt*dw = 1/L
    phase = np.exp(2j * np.pi * (np.outer(st, zf.ravel()) - np.outer(sf, zt.ravel())) / L)
    values = (Ag @ phase) / G.volume
    return float(np.min(values.real))


# -- scans -----------------------------------------------------------------------


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class ScanRow:
    a: int
    b: int
    density: float
    A: float
    B: float
    condition: float


def frame_set_scan(window: FiniteSignal, pairs=None, method: str = "dense") -> list[ScanRow]:
    """Frame bounds over a set of separable lattices ``(a, b)`` (all divisor pairs by default)."""
    L = window.length
    if pairs is None:
        ds = divisors(L)
        pairs = [(a, b) for a in ds for b in ds]
    rows = []
    for a, b in pairs:
        G = GaborSystem(window, a, b)
        rep = frame_bounds(G, method)
        rows.append(ScanRow(a, b, G.density, rep.A, rep.B, rep.condition))
    return rows
