import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tfrlab import (
    FiniteSignal, GaborSystem, NumericalError, ValidationError, analysis, canonical_dual, cg_solve, divisors,
    figa_check, frame_algorithm, frame_bounds, frame_operator_apply, frame_operator_matrix, frame_set_scan,
    gaussian, hermite_window, inner, janssen_lower_bound, sech, synthesis, tight_window, tolimieri_orr_bound,
    twosided_exp, wexler_raz_residual,
)


def block_window(L, a):
    v = np.zeros(L)
    v[:a] = 1
    return FiniteSignal(v).normalized()


def brute_force_S(G, f):
    ti, fi = G.lattice_points()
    out = np.zeros(G.length, dtype=complex)
    for t, k in zip(ti, fi):
        atom = G.atom(t, k)
        out += inner(f, atom) * atom.values
    return out


@pytest.fixture
def G2(g0_144):
    return GaborSystem(g0_144, 6, 12)


def test_lattice_validation(g0_144):
    with pytest.raises(ValidationError):
        GaborSystem(g0_144, 5, 12)
    with pytest.raises(ValidationError):
        GaborSystem(g0_144, 48, 12, shear=1)
    G = GaborSystem(g0_144, 12, 6, shear=2)
    assert G.n_atoms == 12 * 24 and G.density == 2


@pytest.mark.parametrize("a,b,c", [(6, 12, 0), (4, 9, 0), (12, 6, 2), (8, 8, 0)])
def test_frame_operator_matches_brute_force(rng, a, b, c):
    g = gaussian().sample(144)
    G = GaborSystem(g, a, b, c)
    f = FiniteSignal.random(144, rng)
    Sf = frame_operator_apply(G, f)
    assert np.max(np.abs(Sf.values - brute_force_S(G, f))) <= 1e-10
    assert np.max(np.abs(frame_operator_matrix(G) @ f.values - Sf.values)) <= 1e-10


def test_frame_operator_self_adjoint_and_psd(rng, G2):
    f, h = FiniteSignal.random(144, rng), FiniteSignal.random(144, rng)
    assert abs(inner(frame_operator_apply(G2, f), h) - inner(f, frame_operator_apply(G2, h))) <= 1e-10
    for G in (G2, GaborSystem(G2.window, 12, 12), GaborSystem(FiniteSignal.random(144, rng), 16, 12)):
        assert np.linalg.eigvalsh(frame_operator_matrix(G)).min() >= -1e-10


def test_frame_operator_commutes_with_lattice_shifts(rng, G2):
    f = FiniteSignal.random(144, rng)
    t, k = G2.a * 3, G2.b * 2
    shift = lambda s: s.with_values(np.roll(s.values, t) * np.exp(2j * np.pi * k * np.arange(144) / 144))
    assert np.max(np.abs(frame_operator_apply(G2, shift(f)).values - shift(frame_operator_apply(G2, f)).values)) <= 1e-10


def test_block_onb_and_zero_window(rng):
    G = GaborSystem(block_window(144, 12), 12, 12)
    f = FiniteSignal.random(144, rng)
    assert np.max(np.abs(frame_operator_apply(G, f).values - f.values)) <= 1e-12
    Z = GaborSystem(FiniteSignal.zeros(144), 6, 12)
    assert np.all(frame_operator_apply(Z, f).values == 0)
    assert tight_window(G).values == pytest.approx(G.window.values)


def test_frame_bounds_methods_agree(G2):
    d = frame_bounds(G2, "dense")
    it = frame_bounds(G2, "iterative")
    assert d.method == "dense_eig" and it.method == "iterative"
    assert abs(d.A - it.A) <= 1e-6 * d.A and abs(d.B - it.B) <= 1e-6 * d.B
    assert d.A > 0 and d.is_frame


def test_iterative_detects_non_frame(g0_144):
    rep = frame_bounds(GaborSystem(g0_144, 12, 12), "iterative")
    assert not rep.is_frame and rep.condition == math.inf


def test_critical_gaussian_not_a_frame(g0_144):
    rep = frame_bounds(GaborSystem(g0_144, 12, 12))
    assert rep.A < 1e-3 * rep.B


def test_tight_window(G2):
    h = tight_window(G2)
    rep = frame_bounds(G2.with_window(h))
    assert abs(rep.A - 1) <= 1e-7 and abs(rep.B - 1) <= 1e-7
    assert wexler_raz_residual(h, h, G2) <= 1e-7


def test_canonical_dual(rng, G2):
    g = G2.window
    gd = canonical_dual(G2)
    assert np.linalg.norm(frame_operator_apply(G2, gd).values - g.values) <= 1e-9 * np.linalg.norm(g.values)
    f = FiniteSignal.random(144, rng)
    Gd = G2.with_window(gd)
    assert np.max(np.abs(synthesis(Gd, analysis(G2, f)).values - f.values)) <= 1e-7
    assert np.max(np.abs(synthesis(G2, analysis(Gd, f)).values - f.values)) <= 1e-7
    # the dual system's frame operator is S^{-1}
    Sinv = frame_operator_apply(Gd, f)
    assert np.max(np.abs(frame_operator_apply(G2, Sinv).values - f.values)) <= 1e-7


def test_canonical_dual_of_tight_frame():
    G = GaborSystem(tight_window(GaborSystem(gaussian().sample(144), 6, 12)) * math.sqrt(3), 6, 12)
    A = frame_bounds(G).A
    assert np.max(np.abs(canonical_dual(G).values - G.window.values * (1 / A))) <= 1e-9


def test_canonical_dual_rejects_non_frame(g0_144):
    with pytest.raises(NumericalError, match="lower frame bound"):
        canonical_dual(GaborSystem(g0_144, 12, 12))


def test_frame_algorithm_matches_cg(rng, G2):
    rep = frame_bounds(G2)
    h = FiniteSignal.random(144, rng)
    x1 = frame_algorithm(G2, h, rep.A, rep.B)
    x2 = cg_solve(G2, h)
    assert np.max(np.abs(x1.values - x2.values)) <= 1e-8
    with pytest.raises(ValidationError):
        frame_algorithm(G2, h, 0.0, 1.0)


def test_cg_failure_is_an_error(rng, G2):
    with pytest.raises(NumericalError):
        cg_solve(G2, FiniteSignal.random(144, rng), max_iter=1)


def test_wexler_raz(G2):
    g = G2.window
    assert wexler_raz_residual(g, canonical_dual(G2), G2) <= 1e-7
    assert wexler_raz_residual(g, g, G2) > 1e-3
    Gt = G2.with_window(tight_window(G2) * 2.0)
    A = frame_bounds(Gt).A
    assert wexler_raz_residual(Gt.window, Gt.window * (1 / A), Gt) <= 1e-7


def test_figa(rng, G2):
    g = G2.window
    lhs, rhs = figa_check(g, g, g, g, G2)
    assert abs(lhs - rhs) <= 1e-7 * abs(lhs)
    z = FiniteSignal.zeros(144)
    assert figa_check(z, g, g, g, G2) == (0, 0)
    for _ in range(5):
        f, h, gt = (FiniteSignal.random(144, rng) for _ in range(3))
        lhs, rhs = figa_check(f, h, g, gt, G2)
        assert abs(lhs - rhs) <= 1e-7 * max(abs(lhs), 1e-3)


def test_tolimieri_orr(rng, G2):
    lo, hi = tolimieri_orr_bound(G2)
    B = frame_bounds(G2).B
    assert lo <= B * (1 + 1e-10) and B <= hi * (1 + 1e-10)
    G = GaborSystem(block_window(144, 12), 12, 12)
    assert tolimieri_orr_bound(G) == pytest.approx((1.0, 1.0))
    ds = divisors(144)
    for _ in range(10):
        a, b = rng.choice(ds[1:-1], 2)
        G = GaborSystem(FiniteSignal.random(144, rng), a, b)
        lo, hi = tolimieri_orr_bound(G)
        B = frame_bounds(G).B
        assert lo <= B * (1 + 1e-10) and B <= hi * (1 + 1e-10)


def test_janssen(G2):
    A = frame_bounds(G2).A
    assert abs(janssen_lower_bound(G2) - A) <= 1e-5
    Gh = GaborSystem(hermite_window(1).sample(144), 6, 12)
    assert abs(janssen_lower_bound(Gh)) <= 1e-8
    Gs = GaborSystem(sech().sample(144), 12, 6)
    assert janssen_lower_bound(Gs) >= -1e-12
    with pytest.raises(ValidationError, match="hypothesis of the cited result not met"):
        janssen_lower_bound(GaborSystem(G2.window, 8, 12))


@pytest.mark.parametrize("window", [gaussian(), sech(), twosided_exp()])
def test_metaplectic_invariance(window):
    g = window.sample(144)
    G = GaborSystem(g, 8, 9)
    rep = frame_bounds(G)
    for img in (G.transformed("fourier_J"), G.transformed("chirp", 2), G.transformed("chirp", 1)):
        r = frame_bounds(img)
        assert abs(r.A - rep.A) <= 1e-7 and abs(r.B - rep.B) <= 1e-7


def test_coefficient_minimality(rng, G2):
    f = FiniteSignal.random(144, rng)
    Gd = G2.with_window(canonical_dual(G2))
    c0 = analysis(Gd, f)
    ti, fi = G2.lattice_points()
    for _ in range(20):
        # alternative coefficients: add an element of the synthesis kernel
        d = rng.standard_normal(ti.size) + 1j * rng.standard_normal(ti.size)
        d = d - analysis(Gd, synthesis(G2, d))
        c = c0 + d
        assert np.max(np.abs(synthesis(G2, c).values - f.values)) <= 1e-8
        assert np.linalg.norm(c0) <= np.linalg.norm(c) + 1e-12


def test_scan_density_theorem(g0_144):
    rows = frame_set_scan(g0_144, [(12, 16), (16, 18), (6, 12), (24, 12)])
    by = {(r.a, r.b): r for r in rows}
    assert by[(12, 16)].A <= 1e-10 and by[(16, 18)].A <= 1e-10
    assert by[(6, 12)].A > 1e-6
    assert by[(24, 12)].A <= 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(4, 8), (6, 6), (8, 9), (3, 12)]))
def test_frame_operator_property(seed, ab):
    rng = np.random.default_rng(seed)
    G = GaborSystem(FiniteSignal.random(72, rng), *ab)
    f = FiniteSignal.random(72, rng)
    assert np.max(np.abs(frame_operator_apply(G, f).values - frame_operator_matrix(G) @ f.values)) <= 1e-10
    assert np.linalg.eigvalsh(frame_operator_matrix(G)).min() >= -1e-10
