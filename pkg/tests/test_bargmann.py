import math

import numpy as np
import pytest

from tfrlab import (
    FiniteSignal, FockGrid, ValidationError, bargmann, bargmann_with_error, box, fock_inner, fock_norm,
    fock_samples, fourier, gaussian, generalized_gaussian, hermite, hudson_probe, inner, monomial,
    reproducing_eval, stft, stft_at, twosided_exp,
)


def hermite_combination(rng, L=144, order=6):
    c = rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)
    return FiniteSignal(sum(ci * hermite(n).sample(L).values for n, ci in enumerate(c)))


def test_bargmann_of_g0_is_one(rng):
    z = rng.uniform(-2, 2, 20) + 1j * rng.uniform(-2, 2, 20)
    assert np.max(np.abs(bargmann(gaussian(), z) - 1)) <= 1e-12


def test_bargmann_of_shifted_gaussian(rng):
    for _ in range(5):
        xi, eta = rng.uniform(-1, 1, 2)
        # M_{-eta} T_xi g0 as a generalized Gaussian
        f = generalized_gaussian(1.0, xi - 1j * eta, 0.25 * math.log(2) - math.pi * xi**2)
        w = xi + 1j * eta
        z = rng.uniform(-1.5, 1.5, 3) + 1j * rng.uniform(-1.5, 1.5, 3)
        closed = np.exp(-1j * np.pi * xi * eta) * np.exp(-np.pi * abs(w) ** 2 / 2) * np.exp(np.pi * np.conj(w) * z)
        assert np.max(np.abs(bargmann(f, z) - closed)) <= 1e-10


def test_stft_relation(rng):
    for n in (0, 1, 3):
        f = hermite(n)
        for _ in range(3):
            x, w = rng.uniform(-1.5, 1.5, 2)
            z = x + 1j * w
            rhs = np.exp(1j * np.pi * x * w) * np.exp(-np.pi * abs(z) ** 2 / 2) * bargmann(f, z)
            assert abs(stft_at(f, gaussian(), x, -w) - rhs) <= 1e-8


def test_hermite_transforms_to_monomials(rng):
    z = rng.uniform(-1.5, 1.5, 10) + 1j * rng.uniform(-1.5, 1.5, 10)
    for n in range(7):
        assert np.max(np.abs(bargmann(hermite(n), z) - monomial(n)(z))) <= 1e-8
        if n:
            assert abs(bargmann(hermite(n), 0.0)) <= 1e-12


def test_error_estimate():
    val, err = bargmann_with_error(hermite(2), [0.5 + 0.5j, -1.0j])
    assert np.all(err <= 1e-8)
    assert np.max(np.abs(val - monomial(2)(np.array([0.5 + 0.5j, -1.0j])))) <= 1e-8


def test_radius_guard():
    with pytest.raises(ValidationError, match="quadrature truncation invalid"):
        bargmann(gaussian(), 7.0)
    with pytest.raises(ValidationError):
        bargmann("not a window", 0.0)


def test_fock_norm_g0_and_monomials():
    grid = FockGrid()
    assert abs(fock_norm(fock_samples(gaussian(), grid)) - 1) <= 1e-6
    mono = [fock_samples(monomial(n), grid) for n in range(7)]
    gram = np.array([[fock_inner(a, b) for b in mono] for a in mono])
    assert np.max(np.abs(gram - np.eye(7))) <= 1e-6


def test_isometry_battery(rng):
    grid = FockGrid()
    for _ in range(20):
        f = hermite_combination(rng)
        assert abs(fock_norm(fock_samples(f, grid)) - f.norm()) <= 1e-6 * f.norm()


def test_inner_products_preserved(rng):
    f, h = hermite_combination(rng), hermite_combination(rng)
    assert abs(fock_inner(fock_samples(f), fock_samples(h)) - inner(f, h)) <= 1e-6 * f.norm() * h.norm()


def test_reproducing_kernel(rng):
    F = fock_samples(gaussian())
    E1 = fock_samples(monomial(1))
    for w in rng.uniform(-1.4, 1.4, 10) + 1j * rng.uniform(-1.4, 1.4, 10):
        assert abs(reproducing_eval(F, w) - 1) <= 1e-5
        assert abs(reproducing_eval(E1, w) - monomial(1)(w)) <= 1e-5
    f = hermite_combination(rng)
    Ff = fock_samples(f)
    for w in (0.3 + 0.2j, -0.8 + 0.5j):
        assert abs(reproducing_eval(Ff, w) - bargmann(f, w)) <= 1e-5 * f.norm()
    with pytest.raises(ValidationError):
        reproducing_eval(F, 2.5)


def test_growth_bound(rng):
    f = hermite_combination(rng)
    nrm = fock_norm(fock_samples(f))
    z = rng.uniform(-3, 3, 100) + 1j * rng.uniform(-3, 3, 100)
    assert np.all(np.abs(bargmann(f, z)) * np.exp(-np.pi * np.abs(z) ** 2 / 2) <= nrm + 1e-6)


def test_grid_mismatch():
    a = fock_samples(gaussian(), FockGrid())
    b = fock_samples(gaussian(), FockGrid(n_radial=64))
    with pytest.raises(ValidationError):
        fock_inner(a, b)
    with pytest.raises(ValidationError):
        FockGrid(radius=-1)


def test_hermite_orthonormal():
    H = [hermite(n).sample(256) for n in range(12)]
    gram = np.array([[inner(a, b) for b in H] for a in H])
    assert np.max(np.abs(gram - np.eye(12))) <= 1e-10
    assert np.max(np.abs(H[0].values - gaussian().sample(256).values)) <= 1e-15


def test_hermite_fourier_eigenfunctions():
    w = np.linspace(-4, 4, 81)
    for n in range(11):
        h = hermite(n)
        assert np.max(np.abs(h.fourier(w) - (-1j) ** n * h.evaluate(w))) <= 1e-8
        hs = h.sample(256)
        assert np.max(np.abs(fourier(hs).values - (-1j) ** n * hs.values)) <= 1e-8


def test_hermite_order_checks():
    with pytest.raises(ValidationError):
        hermite(-1)
    with pytest.raises(ValidationError):
        hermite(65)


def test_hermite_spectrogram_radial():
    g = gaussian().sample(144)
    for n in (1, 2, 5):
        V = np.abs(stft(hermite(n).sample(144), g).values)
        # (x, w) -> (w, -x) on the centered grid: transpose, then reverse the new column axis about zero
        rot = np.roll(V.T[:, ::-1], 1, axis=1)
        assert np.max(np.abs(V - rot)) <= 1e-8


def test_hudson_probe():
    m0, p0 = hudson_probe(gaussian())
    assert m0 > 0
    m1, p1 = hudson_probe(hermite(1))
    assert abs(m1 + 2) <= 1e-8 and p1.x == 0 and p1.omega == 0
    assert hudson_probe(generalized_gaussian(1 + 0.5j, 0.3, 0.2))[0] > 0
    xs = np.linspace(-0.5, 0.5, 5)
    assert hudson_probe(box(), (xs, np.linspace(0.5, 1.5, 5)))[0] < 0


def test_disc_truncation_for_kinked_windows():
    # a kink gives algebraic STFT decay, so the default disc misses visible Fock mass
    f = twosided_exp()
    errs = [abs(fock_norm(fock_samples(f, FockGrid(radius=R, n_radial=64, n_angular=64))) - f.norm()) for R in (3.0, 4.0, 6.0)]
    assert errs[1] > 1e-6
    assert errs[0] > errs[1] > errs[2]
