import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tfrlab import (
    FiniteSignal, GaborSystem, ValidationError, ZakMatrix, box, frame_bounds, frame_operator_apply,
    frame_operator_matrix, gaussian, hermite_window, quasiperiodicity_residual, sinc, zak_continuum, zak_finite,
    zak_frame_bounds, zak_inverse, zak_zero_locate,
)
from tfrlab.gabor import divisors


def block(L, N):
    v = np.zeros(L)
    v[:N] = 1
    return FiniteSignal(v).normalized()


def test_definition_matches_direct_sum(rng):
    f = FiniteSignal.random(60, rng)
    N, M = 6, 10
    Z = zak_finite(f, N)
    scale = np.sqrt(N * f.dt)
    for n in range(N):
        for m in range(M):
            direct = sum(f.values[n + k * N] * np.exp(-2j * np.pi * k * m / M) for k in range(M))
            assert abs(Z.values[n, m] - scale * direct) <= 1e-12


def test_block_indicator_is_unimodular():
    Z = zak_finite(block(144, 12), 12)
    assert np.max(np.abs(np.abs(Z.values) - 1)) <= 1e-12
    rep = zak_frame_bounds(block(144, 12), 12)
    assert rep.A == pytest.approx(1) and rep.B == pytest.approx(1)


def test_gaussian_matches_theta_series():
    g = gaussian().sample(144)
    Z = zak_finite(g, 12)
    n, m = np.arange(12), np.arange(12)
    theta = zak_continuum(gaussian(), (n * g.dt)[:, None], (m / 12)[None, :])
    assert np.max(np.abs(Z.values - theta)) <= 1e-10


@pytest.mark.parametrize("L", [36, 60, 144])
def test_round_trip_and_unitarity(rng, L):
    f = FiniteSignal.random(L, rng)
    for N in divisors(L):
        Z = zak_finite(f, N)
        assert np.max(np.abs(zak_inverse(Z).values - f.values)) <= 1e-12
        assert abs(Z.cell_mass() - f.norm() ** 2) <= 1e-10
        assert quasiperiodicity_residual(Z) <= 1e-10


def test_round_trip_structured():
    for f in (gaussian().sample(144), block(144, 12)):
        assert np.max(np.abs(zak_inverse(zak_finite(f, 12)).values - f.values)) <= 1e-12


def test_corrupted_matrix_detected(rng):
    Z = zak_finite(FiniteSignal.random(64, rng), 8)
    v = Z.values.copy()
    v[0, 3] += 1.0
    bad = ZakMatrix(v, Z.dt, Z.next_row, Z.next_col)
    assert quasiperiodicity_residual(bad) > 0.1


def test_covariance_under_grid_shifts(rng):
    L, N = 144, 12
    M = L // N
    f = FiniteSignal.random(L, rng)
    Z = zak_finite(f, N).values
    # a shift by one cell (N samples) multiplies by exp(-2 pi i w); modulation by one bin shifts w by one step
    Zt = zak_finite(f.with_values(np.roll(f.values, N)), N).values
    assert np.max(np.abs(Zt - np.exp(-2j * np.pi * np.arange(M) / M)[None, :] * Z)) <= 1e-10
    Zm = zak_finite(f.with_values(f.values * np.exp(2j * np.pi * np.arange(L) / L)), N).values
    assert np.max(np.abs(Zm - np.exp(2j * np.pi * np.arange(N) / L)[:, None] * np.roll(Z, 1, axis=1))) <= 1e-10


def test_bad_factorization(rng):
    with pytest.raises(ValidationError):
        zak_finite(FiniteSignal.random(64, rng), 5)
    with pytest.raises(ValidationError):
        zak_frame_bounds(GaborSystem(gaussian().sample(64), 4, 8))


@pytest.mark.parametrize("L", [64, 144])
def test_frame_bounds_match_eigenvalues(rng, L):
    N = int(np.sqrt(L))
    for g in (gaussian().sample(L), FiniteSignal.random(L, rng)):
        ev = np.linalg.eigvalsh(frame_operator_matrix(GaborSystem(g, N, L // N)))
        rep = zak_frame_bounds(g, N)
        assert abs(rep.A - ev[0]) <= 1e-8 and abs(rep.B - ev[-1]) <= 1e-8


def test_diagonalization(rng):
    L, N = 144, 12
    g = FiniteSignal.random(L, rng)
    G = GaborSystem(g, N, L // N)
    mult = np.abs(zak_finite(g, N).values) ** 2
    for _ in range(20):
        f = FiniteSignal.random(L, rng)
        lhs = zak_finite(frame_operator_apply(G, f), N).values
        assert np.max(np.abs(lhs - mult * zak_finite(f, N).values)) <= 1e-8


def test_gaussian_lower_bound_at_cell_center():
    g = gaussian().sample(144)
    Z = zak_finite(g, 12)
    mod2 = np.abs(Z.values) ** 2
    assert mod2.min() == pytest.approx(mod2[6, 6], abs=1e-30)
    assert zak_frame_bounds(g, 12).A == frame_bounds(GaborSystem(g, 12, 12), "zak").A


def test_balian_low_evidence_square_lengths():
    # min |Z|^2 for the periodized Gaussian at critical density, L in {36, 64, 100, 144}
    vals = [zak_frame_bounds(gaussian().sample(n * n), n).A for n in (6, 8, 10, 12)]
    assert all(b < a for a, b in zip(vals, vals[1:])), vals


def test_balian_low_evidence_odd_roots():
    # odd sqrt(L) keeps the cell center (1/2, 1/2) off the grid, so the minimum is a genuine sample
    vals = [zak_frame_bounds(gaussian().sample(n * n), n).A for n in (5, 7, 9, 11)]
    assert all(b < a for a, b in zip(vals, vals[1:])), vals
    assert vals[-1] < 0.05


def test_zero_locate_gaussian():
    (x, w), m = zak_zero_locate(gaussian(), 64)
    assert abs(x - 0.5) <= 1 / 64 and abs(w - 0.5) <= 1 / 64
    mins = [zak_zero_locate(gaussian(), R)[1] for R in (16, 32, 64, 128)]
    assert all(b < a for a, b in zip(mins, mins[1:]))


def test_zero_locate_box_and_hermite():
    assert zak_zero_locate(box(), 32)[1] == pytest.approx(1.0)
    mins = [zak_zero_locate(hermite_window(1), R)[1] for R in (16, 64, 128)]
    assert all(b < a for a, b in zip(mins, mins[1:])) and mins[-1] < 0.02
    assert abs(zak_continuum(hermite_window(1), 0.0, 0.0)) <= 1e-15


def test_zak_continuum_rejects_slow_tails():
    with pytest.raises(ValidationError):
        zak_continuum(sinc(), 0.1, 0.2)
    with pytest.raises(ValidationError):
        zak_zero_locate(gaussian(), 1)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(48, 6), (48, 8), (72, 9), (72, 4)]))
def test_round_trip_property(seed, LN):
    L, N = LN
    f = FiniteSignal.random(L, np.random.default_rng(seed))
    Z = zak_finite(f, N)
    assert np.max(np.abs(zak_inverse(Z).values - f.values)) <= 1e-12
    assert abs(Z.cell_mass() - f.norm() ** 2) <= 1e-10
