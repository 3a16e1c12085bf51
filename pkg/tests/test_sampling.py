import numpy as np
import pytest

from tfrlab import (
    SampleSet, ValidationError, bandpass_reconstruct, box, gaussian, multiband_reconstruct, poisson_check,
    s0_window, s0_window_reconstruct, sech, sinc_band_coefficients, twosided_exp, wkns_reconstruct,
)

sinc2 = lambda t: np.sinc(t) ** 2
T_EVAL = np.linspace(-5, 5, 100)


def test_sinc_reproduces_itself():
    s = SampleSet.from_function(np.sinc, 1.0, 50, band=(-0.5, 0.5))
    assert np.max(np.abs(s.values - (s.indices == 0))) <= 1e-15
    r = wkns_reconstruct(s, T_EVAL)
    assert np.max(np.abs(r.value - np.sinc(T_EVAL))) <= 1e-14


def test_sinc_squared_at_nyquist():
    s = SampleSet.from_function(sinc2, 0.5, 200, band=(-1.0, 1.0))
    r = wkns_reconstruct(s, T_EVAL)
    err = np.abs(r.value - sinc2(T_EVAL))
    assert err.max() <= 1e-4
    assert np.all(err <= r.tail_estimate)


def test_sinc_squared_undersampled_gives_sinc():
    s = SampleSet.from_function(sinc2, 1.0, 200)
    r = wkns_reconstruct(s, T_EVAL, bandwidth=1.0)
    assert np.max(np.abs(r.value - np.sinc(T_EVAL))) <= 1e-4
    assert np.max(np.abs(r.value - sinc2(T_EVAL))) > 0.1


def test_undersampling_rejected():
    s = SampleSet.from_function(sinc2, 1.0, 20, band=(-1.0, 1.0))
    with pytest.raises(ValidationError, match="undersampled"):
        wkns_reconstruct(s, 0.3)
    with pytest.raises(ValidationError):
        wkns_reconstruct(SampleSet.from_function(sinc2, 0.5, 20), 0.3)


def test_sample_set_validation():
    with pytest.raises(ValidationError):
        SampleSet([], 1.0)
    with pytest.raises(ValidationError):
        SampleSet([1.0], -1.0)
    with pytest.raises(ValidationError):
        SampleSet([1.0], 1.0, band=(1.0, 0.0))


def test_scalar_evaluation():
    s = SampleSet.from_function(sinc2, 0.5, 200, band=(-1.0, 1.0))
    r = wkns_reconstruct(s, 0.3)
    assert isinstance(r.value, complex) and abs(r.value - sinc2(0.3)) <= 1e-4


def test_oversampling_consistency(rng):
    t = rng.uniform(-5, 5, 50)
    a = wkns_reconstruct(SampleSet.from_function(sinc2, 0.5, 200, band=(-1.0, 1.0)), t)
    b = wkns_reconstruct(SampleSet.from_function(sinc2, 0.25, 400, band=(-1.0, 1.0)), t)
    assert np.all(np.abs(a.value - b.value) <= a.tail_estimate + b.tail_estimate)


def test_truncation_error_decreases():
    errs = []
    for K in (25, 50, 100, 200, 400):
        s = SampleSet.from_function(sinc2, 0.5, K, band=(-1.0, 1.0))
        errs.append(np.max(np.abs(wkns_reconstruct(s, T_EVAL).value - sinc2(T_EVAL))))
    assert all(b < a for a, b in zip(errs, errs[1:]))
    f = lambda t: np.exp(-np.pi * t**2 / 100)
    errs = []
    for K in (8, 12, 16, 20):
        s = SampleSet.from_function(f, 1.0, K, band=(-0.25, 0.25))
        errs.append(np.max(np.abs(s0_window_reconstruct(s, s0_window(), np.linspace(-3, 3, 61)).value
                                  - f(np.linspace(-3, 3, 61)))))
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_lost_sample_is_linear():
    s = SampleSet.from_function(sinc2, 0.5, 100, band=(-1.0, 1.0))
    k = 7
    v = s.values.copy()
    lost = v[k - s.k_min]
    v[k - s.k_min] = 0
    d = wkns_reconstruct(s, T_EVAL).value - wkns_reconstruct(s.with_values(v), T_EVAL).value
    assert np.max(np.abs(d - lost * np.sinc((T_EVAL - 0.5 * k) / 0.5))) <= 1e-14


def test_bandpass():
    carrier = 3.0
    f = lambda t: np.sinc(t) * np.exp(2j * np.pi * carrier * t)
    s = SampleSet.from_function(f, 1.0, 400, band=(2.5, 3.5))
    assert np.max(np.abs(bandpass_reconstruct(s, carrier, T_EVAL).value - f(T_EVAL))) <= 1e-4
    assert np.max(np.abs(bandpass_reconstruct(s, 2.6, T_EVAL).value - f(T_EVAL))) > 0.1
    base = SampleSet.from_function(sinc2, 0.5, 100, band=(-1.0, 1.0))
    assert np.allclose(bandpass_reconstruct(base, 0.0, T_EVAL).value, wkns_reconstruct(base, T_EVAL).value,
                       rtol=0, atol=1e-15)


def test_multiband():
    f0 = lambda t: np.sinc(t)
    f3 = lambda t: 0.5 * np.sinc(t) ** 2 * np.exp(2j * np.pi * 3 * t)
    s0 = SampleSet.from_function(f0, 1.0, 400, band=(-0.5, 0.5))
    s3 = SampleSet.from_function(f3, 0.5, 400, band=(2.0, 4.0))
    r = multiband_reconstruct([(0.0, s0), (3.0, s3)], T_EVAL)
    assert np.max(np.abs(r.value - f0(T_EVAL) - f3(T_EVAL))) <= 1e-4
    single = multiband_reconstruct([(0.0, s0)], T_EVAL)
    assert np.array_equal(single.value, bandpass_reconstruct(s0, 0.0, T_EVAL).value)
    with pytest.raises(ValidationError):
        multiband_reconstruct([], T_EVAL)


def test_sinc_band_coefficients():
    # fhat = indicator of [l - 1/2, l + 1/2]: f is a modulated sinc and the band coefficients are a delta
    l = 2
    fhat = lambda w: 1.0 if abs(w - l) <= 0.5 else 0.0
    c = sinc_band_coefficients(fhat, l, np.arange(-3, 4))
    assert np.max(np.abs(c - (np.arange(-3, 4) == 0))) <= 1e-10
    # Gaussian spectrum: the k = 0 coefficient is the spectral mass on [-1/2, 1/2]
    g = gaussian()
    c = sinc_band_coefficients(g.fourier, 0, [0])
    from scipy.special import erf
    assert abs(c[0] - 2**0.25 * erf(np.sqrt(np.pi) / 2)) <= 1e-10


def test_s0_window():
    g = s0_window()
    w = np.linspace(-1, 1, 401)
    spec = g.fourier(w)
    assert np.all(np.abs(spec[np.abs(w) <= 0.25] - 1) <= 1e-15)
    assert np.all(spec[np.abs(w) >= 0.5] == 0)
    f = lambda t: np.exp(-np.pi * t**2 / 100)
    t = np.linspace(-3, 3, 61)
    s = SampleSet.from_function(f, 1.0, 20, band=(-0.25, 0.25))
    r = s0_window_reconstruct(s, g, t)
    assert np.max(np.abs(r.value - f(t))) <= 1e-8
    # for the same K the S0 series beats the sinc series
    sinc_err = np.max(np.abs(wkns_reconstruct(s, t, bandwidth=1.0).value - f(t)))
    assert np.max(np.abs(r.value - f(t))) < sinc_err


def test_s0_rejections():
    s = SampleSet.from_function(np.sinc, 1.0, 20, band=(-0.5, 0.5))
    with pytest.raises(ValidationError):
        s0_window_reconstruct(s, s0_window(), 0.0)
    with pytest.raises(ValidationError):
        s0_window_reconstruct(s, gaussian(), 0.0)


@pytest.mark.parametrize("t", [0.0, 0.5])
def test_poisson_gaussian(t):
    r = poisson_check(gaussian(), t, 8)
    assert r.difference <= 1e-12
    if t == 0:
        theta = 2**0.25 * sum(np.exp(-np.pi * k**2) for k in range(-30, 31))
        assert abs(r.lhs - theta) <= 1e-14


@pytest.mark.parametrize("window", [sech(), twosided_exp(), s0_window()])
def test_poisson_within_tail(window):
    for t in (0.0, 0.25, 0.5):
        r = poisson_check(window, t, 8)
        assert r.difference <= r.tail_bound + 1e-13


def test_poisson_rejects_box():
    with pytest.raises(ValidationError, match="decay"):
        poisson_check(box(), 0.0, 8)
