import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from gaitsym.errors import (
    DegenerateSignalError,
    InvalidInputError,
    InvalidParameterError,
    InvalidSpectrumError,
    NoPeriodicityError,
    PreconditionError,
)
from gaitsym.ingest import JointTrajectory
from gaitsym.signal import (
    SpectrumCoefficients,
    SpeedMode,
    autocorrelation,
    dft,
    estimate_cycle,
    fractional_circular_shift,
    idft,
    linear_convolution,
    pearson,
    speed_series,
)

finite = st.floats(-100, 100, allow_nan=False)


def positions(pts, **kw):
    x, y = zip(*pts)
    return JointTrajectory.from_arrays("RAnkle", x, y, **kw)


def drop_nyquist(x):
    X = np.fft.fft(x)
    if len(x) % 2 == 0:
        X[len(x) // 2] = 0.0
    return np.fft.ifft(X).real


# ── Speed ──────────────────────────────────────────────────────────


def test_speed_signed_sum():
    s = speed_series(positions([(0, 0), (3, 4), (6, 8)]), SpeedMode.SIGNED_SUM)
    assert s.values.tolist() == [7.0, 7.0]


def test_speed_euclidean():
    assert speed_series(positions([(0, 0), (3, 4)]), SpeedMode.EUCLIDEAN).values.tolist() == [5.0]


def test_speed_sign_handling():
    t = positions([(0, 0), (-3, 4)])
    assert speed_series(t, SpeedMode.SIGNED_SUM).values.tolist() == [1.0]
    assert speed_series(t, SpeedMode.ABS_SUM).values.tolist() == [7.0]
    assert speed_series(t, SpeedMode.HORIZONTAL).values.tolist() == [-3.0]
    assert speed_series(t, SpeedMode.VERTICAL).values.tolist() == [4.0]


def test_speed_rejects_unrepaired_gaps():
    t = positions([(0, 0), (1, 1), (2, 2)], gap_mask=[False, True, False])
    with pytest.raises(PreconditionError):
        speed_series(t)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=2, max_size=30))
def test_speed_modes_consistent(pts):
    t = positions(pts)
    h = speed_series(t, SpeedMode.HORIZONTAL).values
    v = speed_series(t, SpeedMode.VERTICAL).values
    assert len(h) == len(pts) - 1
    assert np.allclose(speed_series(t, SpeedMode.SIGNED_SUM).values, h + v)
    assert np.allclose(speed_series(t, SpeedMode.ABS_SUM).values, abs(h) + abs(v))
    e = speed_series(t, SpeedMode.EUCLIDEAN).values
    assert np.all(e <= abs(h) + abs(v) + 1e-9)


# ── DFT ────────────────────────────────────────────────────────────


def test_dft_constant():
    assert np.allclose(dft([1, 1, 1, 1]).coefficients, [4, 0, 0, 0], atol=1e-12)


def test_dft_cosine():
    X = dft([1, 0, -1, 0]).coefficients
    assert np.allclose(X, [0, 2, 0, 2], atol=1e-12)
    assert np.allclose(X, oracles.dft([1, 0, -1, 0]), atol=1e-12)


def test_dft_single_point():
    assert dft([1]).coefficients.tolist() == [1]


def test_dft_empty():
    with pytest.raises(InvalidInputError):
        dft([])


@settings(max_examples=40, deadline=None)
@given(st.lists(finite, min_size=1, max_size=40))
def test_dft_matches_direct_sum(x):
    X = dft(x).coefficients
    scale = max(1.0, max(abs(v) for v in x)) * len(x)
    assert np.max(np.abs(X - np.array(oracles.dft(x)))) < 1e-9 * scale


def test_idft_examples():
    assert np.allclose(idft(dft([1, 2, 3, 4])), [1, 2, 3, 4], atol=1e-9)
    assert np.allclose(idft(SpectrumCoefficients(np.array([4, 0, 0, 0], dtype=complex), 4)), [1, 1, 1, 1])


def test_idft_random_round_trip():
    x = np.random.default_rng(7).uniform(-1, 1, 100)
    assert np.max(np.abs(idft(dft(x)) - x)) < 1e-9


def test_idft_rejects_non_conjugate_symmetric():
    with pytest.raises(InvalidSpectrumError):
        idft(SpectrumCoefficients(np.array([0, 1j, 0, 0]), 4))


def test_spectrum_length_mismatch():
    with pytest.raises(InvalidSpectrumError):
        SpectrumCoefficients(np.zeros(3, dtype=complex), 4)


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=1, max_size=64))
def test_parseval(x):
    X = dft(x).coefficients
    lhs = sum(v * v for v in x)
    rhs = float(np.sum(np.abs(X) ** 2)) / len(x)
    assert abs(lhs - rhs) <= 1e-9 * max(lhs, 1e-300) + 1e-12


# ── Fractional shift ───────────────────────────────────────────────


def test_shift_cosine_by_one():
    assert np.allclose(fractional_circular_shift([1, 0, -1, 0], 1), [0, 1, 0, -1], atol=1e-9)


def test_shift_zero_is_identity():
    x = np.random.default_rng(1).normal(size=17)
    assert np.allclose(fractional_circular_shift(x, 0.0), x, atol=1e-12)


def test_shift_inverse_length_64():
    # Stated for an arbitrary random series. With cos(pi d) on the Nyquist
    # bin this only holds when that bin is empty; see test below.
    x = np.random.default_rng(64).uniform(-1, 1, 64)
    back = fractional_circular_shift(fractional_circular_shift(x, 5.25), -5.25)
    assert np.max(np.abs(back - x)) < 1e-9


def test_shift_inverse_length_64_without_nyquist():
    x = drop_nyquist(np.random.default_rng(64).uniform(-1, 1, 64))
    back = fractional_circular_shift(fractional_circular_shift(x, 5.25), -5.25)
    assert np.max(np.abs(back - x)) < 1e-9


def test_shift_nyquist_scaled_by_cos():
    alt = np.array([1.0, -1.0] * 4)
    assert np.allclose(fractional_circular_shift(alt, 0.5), 0.0, atol=1e-12)
    assert np.allclose(fractional_circular_shift(alt, 1.0), -alt, atol=1e-12)
    assert np.allclose(fractional_circular_shift(alt, 0.25), math.cos(math.pi / 4) * alt, atol=1e-12)


def test_quarter_record_shift_is_minus_j_power():
    x = np.random.default_rng(3).normal(size=32)
    X = np.fft.fft(x) * (-1j) ** np.arange(32)
    assert np.allclose(fractional_circular_shift(x, 8.0), np.fft.ifft(X).real, atol=1e-9)


def test_shift_moves_content_later():
    x = np.zeros(16)
    x[3] = 1.0
    assert int(np.argmax(fractional_circular_shift(x, 2))) == 5


@settings(max_examples=80, deadline=None)
@given(st.lists(finite, min_size=2, max_size=80), st.integers(-200, 200))
def test_integer_shift_is_roll(x, d):
    out = fractional_circular_shift(x, d)
    assert np.max(np.abs(out - np.roll(x, d))) < 1e-9 * max(1.0, max(abs(v) for v in x))


@settings(max_examples=80, deadline=None)
@given(
    st.lists(finite, min_size=2, max_size=80),
    st.floats(-50, 50, allow_nan=False),
    st.floats(-50, 50, allow_nan=False),
)
def test_shift_composition_odd_or_nyquist_free(x, d1, d2):
    x = drop_nyquist(np.array(x))
    tol = 1e-9 * max(1.0, float(np.max(np.abs(x))))
    once = fractional_circular_shift(x, d1 + d2)
    twice = fractional_circular_shift(fractional_circular_shift(x, d1), d2)
    assert np.max(np.abs(once - twice)) < tol
    assert np.max(np.abs(fractional_circular_shift(x, len(x)) - x)) < tol


def test_shift_too_short():
    with pytest.raises(InvalidInputError):
        fractional_circular_shift([1.0], 0.5)


# ── Convolution ────────────────────────────────────────────────────


def test_convolution_examples():
    assert linear_convolution([1, 0], [0, 1]).tolist() == [0, 1, 0]
    assert linear_convolution([1, 1], [1, 1]).tolist() == [1, 2, 1]


def test_convolution_length_mismatch():
    with pytest.raises(InvalidInputError):
        linear_convolution([1, 2], [1, 2, 3])


def test_convolution_unknown_method():
    with pytest.raises(InvalidParameterError):
        linear_convolution([1, 2], [1, 2], method="magic")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 120), st.integers(0, 2**32 - 1))
def test_convolution_matches_double_loop(n, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=n), rng.normal(size=n)
    ref = np.array(oracles.convolve(a.tolist(), b.tolist()))
    for method in ("direct", "fft", "auto"):
        out = linear_convolution(a, b, method)
        assert out.shape == (2 * n - 1,)
        assert np.linalg.norm(out - ref) <= 1e-9 * np.linalg.norm(ref)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1), finite, finite)
def test_convolution_commutative_bilinear(n, seed, s, t):
    rng = np.random.default_rng(seed)
    a, b, c = rng.normal(size=(3, n))
    ab = linear_convolution(a, b)
    assert np.allclose(ab, linear_convolution(b, a), rtol=1e-12, atol=1e-12)
    lhs = linear_convolution(s * a + t * c, b)
    rhs = s * ab + t * linear_convolution(c, b)
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * (abs(s) + abs(t) + 1) * n)


# ── Autocorrelation and cycle ──────────────────────────────────────


def test_acf_lag_zero_is_one():
    r = autocorrelation(np.random.default_rng(0).normal(size=50))
    assert r[0] == 1.0


def test_acf_matches_oracle():
    for n in (10, 63, 64, 150):
        x = np.random.default_rng(n).normal(size=n)
        assert np.allclose(autocorrelation(x), oracles.biased_acf(x.tolist()), atol=1e-12)


def test_acf_sine_peaks_at_period():
    r = autocorrelation(np.sin(2 * np.pi * np.arange(100) / 20))
    assert int(np.argmax(r[10:51])) + 10 == 20


def test_acf_white_noise_below_bound():
    r = autocorrelation(np.random.default_rng(2024).normal(size=200))
    assert np.max(r[10:101]) < 0.3


def test_acf_zero_variance():
    with pytest.raises(DegenerateSignalError):
        autocorrelation([3.0] * 20)


def test_cycle_sine_33():
    est = estimate_cycle(np.sin(2 * np.pi * np.arange(99) / 33))
    assert est.period_frames == 33
    assert est.search_range == (15, 49)


def test_cycle_impulse_aperiodic():
    x = np.ones(99)
    x[50] = 10.0
    with pytest.raises(NoPeriodicityError):
        estimate_cycle(x)


def test_cycle_dominant_period():
    n = np.arange(150)
    x = np.sin(2 * np.pi * n / 30) + 0.2 * np.sin(2 * np.pi * n / 15)
    r = oracles.biased_acf(x.tolist())
    assert max(range(15, 76), key=lambda k: r[k]) == 30
    assert estimate_cycle(x).period_frames == 30


def test_cycle_bad_lags():
    with pytest.raises(InvalidParameterError):
        estimate_cycle(np.sin(np.arange(40.0)), min_lag=30, max_lag=20)


@settings(max_examples=60, deadline=None)
@given(st.integers(16, 60), st.floats(3, 8), st.floats(0, 2 * np.pi))
def test_cycle_recovers_sinusoid_period(P, n_periods, phase):
    M = int(math.ceil(n_periods * P))
    x = np.sin(2 * np.pi * np.arange(M) / P + phase)
    assert estimate_cycle(x).period_frames == P


# ── Pearson ────────────────────────────────────────────────────────


def test_pearson_examples():
    x = np.random.default_rng(5).normal(size=30)
    assert pearson(x, x) == pytest.approx(1.0, abs=1e-12)
    assert pearson(x, -x) == pytest.approx(-1.0, abs=1e-12)
    ref = oracles.pearson([1, 2, 3, 4], [2, 4, 6, 8.1])
    assert pearson([1, 2, 3, 4], [2, 4, 6, 8.1]) == pytest.approx(ref, abs=1e-12)
    # direct evaluation gives 0.999927; the quoted 0.99996 agrees to 1e-4
    assert ref == pytest.approx(0.99996, abs=1e-4)


def test_pearson_errors():
    with pytest.raises(DegenerateSignalError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(InvalidInputError):
        pearson([1, 2, 3], [1, 2])


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.tuples(finite, finite), min_size=3, max_size=40),
    st.floats(0.01, 100),
    finite,
)
def test_pearson_affine_invariance(pairs, a, b):
    x = np.array([p[0] for p in pairs])
    y = np.array([p[1] for p in pairs])
    assume(np.std(x) > 1e-3 and np.std(y) > 1e-3)
    rho = pearson(x, y)
    assert -1.0 <= rho <= 1.0
    assert pearson(a * x + b, y) == pytest.approx(rho, abs=1e-12)
    assert pearson(-a * x + b, y) == pytest.approx(-rho, abs=1e-12)
    assert rho == pytest.approx(oracles.pearson(x.tolist(), y.tolist()), abs=1e-9)
