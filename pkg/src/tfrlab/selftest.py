"""Fast oracle comparisons per module, used by ``tfrlab <cmd> --selftest``."""

from __future__ import annotations

import importlib
import math
from typing import Callable, NamedTuple

import numpy as np

from . import diagnostics as dg
from . import gabor as gb
from . import operators as op
from . import sampling as sp
from . import tfr
from . import windows as win
from . import zak as zk
from .signals import FiniteSignal, inner

# the package re-exports the function ``bargmann`` under the submodule's name
bg = importlib.import_module(".bargmann", __package__)

__all__ = ["Check", "CHECKS", "run"]


class Check(NamedTuple):
    name: str
    passed: bool
    error: float
    tol: float


def _g0(L: int) -> FiniteSignal:
    return win.gaussian().sample(L)


def _core():
    L = 144
    g = _g0(L)
    rng = np.random.default_rng(0)
    f = FiniteSignal.random(L, rng)
    dt = g.dt
    out = [
        ("fourier(g0) = g0", np.max(np.abs(op.fourier(g).values - g.values)), 1e-12),
        ("fourier_J^4 = -I", np.max(np.abs(op.fourier_J(op.fourier_J(op.fourier_J(op.fourier_J(f)))).values
                                           + f.values)), 1e-12),
        ("Plancherel", abs(op.fourier(f).norm() - f.norm()), 1e-12),
        ("tf_shift unitary", abs(op.tf_shift(f, (3 * dt, 5 / (L * dt))).norm() - f.norm()), 1e-12),
        ("dilation(g0, 2) = gaussian(1/4)", np.max(np.abs(op.dilation(g, 2.0).values
                                                        - win.gaussian(0.25).sample(L).values)), 1e-8),
    ]
    return out


def _tfr():
    L = 144
    g = _g0(L)
    V = tfr.stft(g, g)
    X, W = V.mesh()
    closed = np.exp(-1j * np.pi * X * W) * np.exp(-np.pi * (X**2 + W**2) / 2)
    rng = np.random.default_rng(1)
    f = FiniteSignal.random(L, rng)
    h = FiniteSignal.random(L, rng)
    Vf, Vh = tfr.stft(f, g), tfr.stft(h, g)
    moyal = tfr.tf_inner(Vf, Vh) - inner(f, h) * g.norm() ** 2
    Wg = tfr.wigner(g)
    Xw, Ww = Wg.mesh()
    b = win.box()
    return [
        ("STFT of g0 closed form", np.max(np.abs(V.values - closed)), 1e-6),
        ("Moyal identity", abs(moyal) / (f.norm() * h.norm()), 1e-10),
        ("istft round trip", np.max(np.abs(tfr.istft(Vf, g, g.normalized() * (1 / g.norm())).values
                                           - f.values)) / np.max(np.abs(f.values)), 1e-8),
        ("Wigner of g0 closed form", np.max(np.abs(Wg.values - 2 * np.exp(-2 * np.pi * (Xw**2 + Ww**2)))), 1e-6),
        ("box ambiguity closed form", abs(tfr.ambiguity_at(b, None, 0.25, 1.3)
                                          - math.sin(math.pi * 1.3 * 0.75) / (math.pi * 1.3)), 1e-8),
    ]


def _gabor():
    L = 144
    g = _g0(L)
    G = gb.GaborSystem(g, 6, 12)
    dense = gb.frame_bounds(G, "dense")
    it = gb.frame_bounds(G, "iterative")
    gd = gb.canonical_dual(G)
    G2 = gb.GaborSystem(win.hermite_window(1).sample(L), 6, 12)
    lo, hi = gb.tolimieri_orr_bound(G)
    return [
        ("dense vs iterative bounds", max(abs(dense.A - it.A), abs(dense.B - it.B)) / dense.B, 1e-8),
        ("Wexler-Raz canonical dual", gb.wexler_raz_residual(g, gd, G), 1e-7),
        ("Janssen bound = lambda_min", abs(gb.janssen_lower_bound(G) - dense.A), 1e-8),
        ("hermite(1) density 2 not a frame", gb.frame_bounds(G2, "dense").A, 1e-8),
        ("Tolimieri-Orr sandwich", 0.0 if lo <= dense.B * (1 + 1e-10) and dense.B <= hi * (1 + 1e-10) else 1.0, 0.5),
    ]


def _zak():
    L = 144
    g = _g0(L)
    Z = zk.zak_finite(g, 12)
    G = gb.GaborSystem(g, 12, 12)
    S = gb.frame_operator_matrix(G)
    ev = np.linalg.eigvalsh(S)
    rep = zk.zak_frame_bounds(g, 12)
    x, w = 0.3, 0.7
    theta = zk.zak_continuum(win.gaussian(), x, w)
    direct = sum(win.gaussian().evaluate(x + k) * np.exp(-2j * np.pi * k * w) for k in range(-20, 21))
    return [
        ("Zak inverse", np.max(np.abs(zk.zak_inverse(Z).values - g.values)), 1e-12),
        ("quasi-periodicity", zk.quasiperiodicity_residual(Z), 1e-12),
        ("cell mass = norm^2", abs(Z.cell_mass() - g.norm() ** 2), 1e-12),
        ("|Z|^2 extremes = eigenvalues of S", max(abs(rep.A - ev[0]), abs(rep.B - ev[-1])), 1e-8),
        ("continuum Zak series", abs(complex(theta) - direct), 1e-12),
    ]


def _sampling():
    f = lambda t: np.sinc(t) ** 2
    s = sp.SampleSet.from_function(f, 0.5, 200, band=(-1.0, 1.0))
    t = np.linspace(-5, 5, 100)
    r = sp.wkns_reconstruct(s, t)
    res = [sp.poisson_check(win.gaussian(), t0, 8) for t0 in (0.0, 0.5)]
    carrier = 3.0
    fb = lambda t: np.sinc(t) * np.exp(2j * np.pi * carrier * t)
    sb = sp.SampleSet.from_function(fb, 1.0, 400, band=(carrier - 0.5, carrier + 0.5))
    rb = sp.bandpass_reconstruct(sb, carrier, t)
    return [
        ("sinc^2 at Nyquist", np.max(np.abs(r.value - f(t))), 1e-4),
        ("Poisson gaussian t=0", res[0].difference, 1e-12),
        ("Poisson gaussian t=1/2", res[1].difference, 1e-12),
        ("bandpass reconstruction", np.max(np.abs(rb.value - fb(t))), 1e-4),
    ]


def _bargmann():
    grid = bg.FockGrid()
    g0 = win.gaussian()
    F = bg.fock_samples(g0, grid)
    mono = [bg.fock_samples(bg.monomial(n), grid) for n in range(4)]
    gram = np.array([[bg.fock_inner(a, b) for b in mono] for a in mono])
    h3 = bg.hermite(3)
    w = np.linspace(-3, 3, 41)
    return [
        ("||B g0|| = 1", abs(bg.fock_norm(F) - 1.0), 1e-6),
        ("monomials orthonormal", np.max(np.abs(gram - np.eye(4))), 1e-6),
        ("reproducing kernel", abs(bg.reproducing_eval(F, 0.5 + 0.3j) - bg.bargmann(g0, 0.5 + 0.3j)), 1e-5),
        ("fourier(h_3) = i h_3", np.max(np.abs(h3.fourier(w) - (-1j) ** 3 * h3.evaluate(w))), 1e-8),
        ("B h_2 = e_2", abs(bg.bargmann(bg.hermite(2), 0.7 - 0.2j) - bg.monomial(2)(0.7 - 0.2j)), 1e-8),
    ]


def _diagnostics():
    L = 144
    g = _g0(L)
    prod, bound = dg.hpw_product(g)
    h1 = win.hermite_window(1).sample(L)
    p1, b1 = dg.hpw_product(h1)
    l1 = dg.lieb_check(g, g, 1)
    l4 = dg.lieb_check(g, g, 4)
    n = np.arange(L)
    ds = dg.donoho_stark_check(g, np.abs((n + L // 2) % L - L // 2) < 20, np.abs((n + L // 2) % L - L // 2) < 20)
    return [
        ("HPW equality for g0", abs(prod - bound) / bound, 1e-8),
        ("HPW strict for hermite(1)", 0.0 if p1 > 2 * b1 else 1.0, 0.5),
        ("Lieb p=1 direction", 0.0 if dg.lieb_holds(*l1, 1) else 1.0, 0.5),
        ("Lieb p=4 direction", 0.0 if dg.lieb_holds(*l4, 4) else 1.0, 0.5),
        ("Donoho-Stark slack", max(-ds.slack, 0.0), 1e-8),
    ]


CHECKS: dict[str, Callable] = {
    "core": _core,
    "tfr": _tfr,
    "gabor": _gabor,
    "zak": _zak,
    "sampling": _sampling,
    "bargmann": _bargmann,
    "diagnostics": _diagnostics,
}


def run(module: str) -> list[Check]:
    out = []
    for name, err, tol in CHECKS[module]():
        err = float(err)
        out.append(Check(name, bool(err <= tol), err, tol))
    return out
