import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractalmodal.core import CurveKind, FluctuationCurve, loglog_fit, make_scale_grid
from fractalmodal.dfa import channel_exponents, dfa_1d, dfa_2d, fluctuation_1d, fluctuation_2d
from fractalmodal.errors import DegenerateInput, InputTooSmall, SeriesTooShort
from fractalmodal.pipeline import classify_valence
from fractalmodal.signals import Channel, Plane, RgbImage, TimeSeries
from fractalmodal.synth import gen_fgn_1d, gen_field_2d, gen_white_noise_1d
from oracles import naive_fluctuation_1d, naive_fluctuation_2d

N = 2**16


def rel_close(a, b, rtol):
    np.testing.assert_allclose(a, b, rtol=rtol, atol=0)


# --------------------------------------------------------------------------
# 1D

def test_constant_series_is_degenerate():
    with pytest.raises(DegenerateInput):
        fluctuation_1d(TimeSeries(np.full(400, 3.0)), make_scale_grid(400))


def test_short_series():
    with pytest.raises(SeriesTooShort):
        fluctuation_1d(np.arange(19.0), [5, 6, 7])


@pytest.mark.parametrize("length,scales", [(512, [5, 8, 16]), (333, [5, 7, 11, 13, 40, 83])])
def test_fluctuation_1d_matches_naive(rng, length, scales):
    x = rng.standard_normal(length)
    rel_close(fluctuation_1d(x, scales).values, naive_fluctuation_1d(x, scales), 1e-10)


def test_white_noise_alpha():
    assert dfa_1d(gen_white_noise_1d(N, seed=7)).exponent == pytest.approx(0.5, abs=0.05)


def test_brownian_alpha():
    walk = np.cumsum(gen_white_noise_1d(N, seed=7).samples)
    assert dfa_1d(walk).exponent == pytest.approx(1.5, abs=0.1)


def test_fgn_alpha_and_upper_half_stability():
    x = gen_fgn_1d(N, 0.7, seed=3)
    full = dfa_1d(x)
    assert full.exponent == pytest.approx(0.7, abs=0.05)
    grid = make_scale_grid(N)
    upper = grid.scales[len(grid) // 2:]
    half = dfa_1d(x, fit_range=(upper[0], upper[-1]))
    assert half.fit.n_points == len(upper)
    assert abs(half.exponent - full.exponent) < 0.1


def test_injected_linear_curve():
    s = np.arange(5, 40, 3)
    curve = FluctuationCurve(s, s.astype(float), np.ones(len(s)), CurveKind.DFA1D)
    assert loglog_fit(curve).exponent == pytest.approx(1.0, abs=1e-12)


def test_result_records_curve_and_fit(rng):
    x = rng.standard_normal(2000)
    res = dfa_1d(x)
    assert res.exponent == res.fit.exponent
    assert res.curve.kind is CurveKind.DFA1D
    assert np.all(res.curve.signs == 1)
    assert list(res.curve.scales) == list(make_scale_grid(2000).scales)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.floats(-1e4, 1e4), st.floats(1e-3, 1e3))
def test_1d_shift_and_scale(seed, c, k):
    x = np.random.default_rng(seed).standard_normal(600)
    grid = make_scale_grid(600)
    base = fluctuation_1d(x, grid).values
    rel_close(fluctuation_1d(x + c, grid).values, base, 1e-9)
    rel_close(fluctuation_1d(k * x, grid).values, k * base, 1e-9)
    assert dfa_1d(k * x, grid).exponent == pytest.approx(dfa_1d(x, grid).exponent, abs=1e-9)


# --------------------------------------------------------------------------
# 2D

def test_constant_plane_is_degenerate():
    with pytest.raises(DegenerateInput):
        fluctuation_2d(Plane(np.full((40, 40), 9.0)), make_scale_grid(40))


def test_small_plane():
    with pytest.raises(InputTooSmall):
        fluctuation_2d(np.random.default_rng(0).random((19, 30)), [5, 6, 7])


def test_fluctuation_2d_matches_naive(rng):
    img = rng.integers(0, 256, size=(64, 64)).astype(float)
    rel_close(fluctuation_2d(img, [5, 8]).values, naive_fluctuation_2d(img, [5, 8]), 1e-10)


def test_fluctuation_2d_matches_naive_rectangular(rng):
    img = rng.standard_normal((37, 29))
    scales = [5, 6, 7]
    rel_close(fluctuation_2d(img, scales).values, naive_fluctuation_2d(img, scales), 1e-10)


def test_transpose_invariance(rng):
    img = rng.random((96, 96))
    grid = make_scale_grid(96)
    rel_close(fluctuation_2d(img.T, grid).values, fluctuation_2d(img, grid).values, 1e-12)


def test_uniform_noise_plane():
    img = np.random.default_rng(5).random((512, 512))
    assert dfa_2d(Plane(img)).exponent == pytest.approx(0.5, abs=0.1)


def test_field_alpha():
    assert dfa_2d(gen_field_2d(512, 0.8, seed=1)).exponent == pytest.approx(0.8, abs=0.1)


def test_2d_scale_and_shift(rng):
    p = gen_field_2d(128, 0.6, seed=4)
    grid = make_scale_grid(128)
    base = dfa_2d(p, grid)
    scaled = dfa_2d(Plane(3.0 * p.values), grid)
    shifted = dfa_2d(Plane(p.values + 17), grid)
    assert scaled.exponent == pytest.approx(base.exponent, abs=1e-9)
    assert scaled.fit.intercept == pytest.approx(base.fit.intercept + np.log(3), abs=1e-9)
    rel_close(shifted.curve.values, base.curve.values, 1e-9)
    assert shifted.exponent == pytest.approx(base.exponent, abs=1e-9)


def test_channel_tag_copied():
    p = Plane(np.random.default_rng(1).random((64, 64)), Channel.BLUE)
    assert dfa_2d(p).channel_tag is Channel.BLUE


# --------------------------------------------------------------------------
# channels

def test_identical_channels_give_equal_exponents(rng):
    img = RgbImage.from_gray(rng.integers(0, 256, size=(80, 80)).astype(float))
    res = channel_exponents(img)
    a = [res.alpha(c) for c in (Channel.RED, Channel.GREEN, Channel.BLUE)]
    assert a[1] == pytest.approx(a[0], abs=1e-12)
    assert a[2] == pytest.approx(a[0], abs=1e-12)
    assert res.alpha_mean == pytest.approx(a[0], abs=1e-12)
    assert classify_valence(res.alpha_mean) is classify_valence(a[0])


def test_channel_failures_are_isolated():
    red = gen_field_2d(128, 0.5, seed=2).values
    flat = np.full((128, 128), 40.0)
    res = channel_exponents(RgbImage.from_arrays(red, flat, flat))
    assert set(res.results) == {Channel.RED}
    assert isinstance(res.errors[Channel.GREEN], DegenerateInput)
    assert isinstance(res.errors[Channel.BLUE], DegenerateInput)
    assert np.isfinite(res.alpha(Channel.RED))
    with pytest.raises(DegenerateInput):
        res.alpha_mean
