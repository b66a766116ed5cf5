import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractalmodal.core import CurveKind, FluctuationCurve, make_scale_grid
from fractalmodal.dcca import (
    cross_fit,
    cross_fluctuation_1d,
    cross_fluctuation_2d,
    dcca_1d,
    dcca_2d,
    gamma_from_lambda,
    image_pair_coefficient,
    mean_gamma,
)
from fractalmodal.dfa import channel_exponents, dfa_1d, dfa_2d, fluctuation_1d, fluctuation_2d
from fractalmodal.errors import (
    AllZeroCrossFluctuation,
    DegenerateInput,
    DimensionMismatch,
    LengthMismatch,
)
from fractalmodal.signals import Channel, RgbImage
from fractalmodal.synth import gen_field_2d, gen_white_noise_1d
from oracles import naive_cross_f2_1d, naive_cross_f2_2d


def rel_close(a, b, rtol):
    np.testing.assert_allclose(a, b, rtol=rtol, atol=0)


def test_gamma_from_lambda():
    assert gamma_from_lambda(0.5) == 1.0
    assert gamma_from_lambda(1.0) == 0.0
    assert gamma_from_lambda(1.5) == -1.0


# --------------------------------------------------------------------------
# 1D

def test_self_cross_equals_dfa(rng):
    x = rng.standard_normal(3000)
    grid = make_scale_grid(3000)
    c = cross_fluctuation_1d(x, x, grid)
    rel_close(c.values, fluctuation_1d(x, grid).values, 1e-12)
    assert np.all(c.signs == 1) and c.kind is CurveKind.DCCA1D


def test_cross_1d_matches_naive(rng):
    x, y = rng.standard_normal(512), rng.standard_normal(512)
    scales = [5, 8, 16]
    rel_close(cross_fluctuation_1d(x, y, scales).squared, naive_cross_f2_1d(x, y, scales), 1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_cross_1d_symmetry_and_cauchy_schwarz(seed):
    r = np.random.default_rng(seed)
    x, y = r.standard_normal(700), np.cumsum(r.standard_normal(700))
    grid = make_scale_grid(700)
    xy, yx = cross_fluctuation_1d(x, y, grid), cross_fluctuation_1d(y, x, grid)
    assert xy.values.tobytes() == yx.values.tobytes()
    assert xy.signs.tobytes() == yx.signs.tobytes()
    bound = fluctuation_1d(x, grid).values * fluctuation_1d(y, grid).values
    assert np.all(np.abs(xy.squared) <= bound * (1 + 1e-9))


def test_affine_dependence(rng):
    x = np.cumsum(rng.standard_normal(4096))
    res = dcca_1d(x, 2 * x + 5)
    assert res.lambda_ == pytest.approx(dfa_1d(x).exponent, abs=1e-9)
    assert np.all(res.curve.signs == 1) and res.sign_consistent


def test_sign_flip(rng):
    x = rng.standard_normal(4096)
    res = dcca_1d(x, -x)
    grid = make_scale_grid(4096)
    rel_close(res.curve.values, fluctuation_1d(x, grid).values, 1e-12)
    assert np.all(res.curve.signs == -1)
    assert res.sign_consistent
    assert res.gamma_x == 2 - 2 * res.lambda_


@pytest.mark.parametrize("c,d", [(0.5, 3.0), (4.0, -2.0)])
def test_affine_equivariance_1d(rng, c, d):
    x, y = rng.standard_normal(2048), rng.standard_normal(2048) + 0.5 * rng.standard_normal(2048)
    y = y + 0.8 * x
    grid = make_scale_grid(2048)
    base = cross_fluctuation_1d(x, y, grid)
    moved = cross_fluctuation_1d(x, c * y + d, grid)
    rel_close(moved.squared, c * base.squared, 1e-9)
    assert dcca_1d(x, c * y + d, grid).lambda_ == pytest.approx(dcca_1d(x, y, grid).lambda_, abs=1e-9)


def test_length_mismatch_and_degenerate(rng):
    with pytest.raises(LengthMismatch):
        cross_fluctuation_1d(rng.standard_normal(100), rng.standard_normal(101), [5, 6, 7])
    with pytest.raises(DegenerateInput):
        cross_fluctuation_1d(rng.standard_normal(100), np.ones(100), [5, 6, 7])


def test_zero_scales_excluded_and_all_zero_rejected():
    s = np.arange(5, 15)
    f2 = (s / 5.0) ** 1.4
    f2[2] = 0.0
    res = cross_fit(FluctuationCurve.from_squared(s, f2, CurveKind.DCCA1D))
    assert res.fit.n_points == len(s) - 1
    assert res.lambda_ == pytest.approx(0.7, abs=1e-12)
    with pytest.raises(AllZeroCrossFluctuation):
        cross_fit(FluctuationCurve.from_squared(s, np.zeros(len(s)), CurveKind.DCCA1D))


def test_mixed_signs_flag_inconsistency():
    s = np.arange(5, 15)
    f2 = (s / 5.0) ** 1.2 * np.where(s % 2, 1, -1)
    res = cross_fit(FluctuationCurve.from_squared(s, f2, CurveKind.DCCA1D))
    assert not res.sign_consistent
    assert res.lambda_ == pytest.approx(0.6, abs=1e-12)


def test_independent_noise_lambda_is_three_quarters():
    """Independent series have no cross-correlation to measure.

    The detrended covariance is then pure estimation noise: per box it has
    size ~ s (the product of two residuals ~ sqrt(s) each), and averaging
    over N/s boxes leaves ~ s / sqrt(N/s), so |F^2| ~ s^1.5 and lambda -> 0.75.
    """
    lams = []
    for k in range(20):
        x = gen_white_noise_1d(2**16, seed=1000 + k)
        y = gen_white_noise_1d(2**16, seed=2000 + k)
        lams.append(dcca_1d(x, y).lambda_)
    assert np.mean(lams) == pytest.approx(0.75, abs=0.05)


# --------------------------------------------------------------------------
# 2D

def test_self_cross_2d_equals_dfa(rng):
    p = rng.random((100, 100))
    grid = make_scale_grid(100)
    rel_close(cross_fluctuation_2d(p, p, grid).values, fluctuation_2d(p, grid).values, 1e-12)


def test_cross_2d_matches_naive(rng):
    a, b = rng.random((40, 40)), rng.random((40, 40))
    rel_close(cross_fluctuation_2d(a, b, [5, 8]).squared, naive_cross_f2_2d(a, b, [5, 8]), 1e-10)


def test_cross_2d_commutes(rng):
    a, b = rng.random((90, 90)), rng.random((90, 90))
    grid = make_scale_grid(90)
    ab, ba = cross_fluctuation_2d(a, b, grid), cross_fluctuation_2d(b, a, grid)
    assert ab.values.tobytes() == ba.values.tobytes()
    assert ab.signs.tobytes() == ba.signs.tobytes()


def test_cross_2d_affine(rng):
    a = rng.random((80, 80))
    grid = make_scale_grid(80)
    c = cross_fluctuation_2d(a, 3 * a + 10, grid)
    dfa = fluctuation_2d(a, grid).values
    # F^2 scales by 3, so the magnitude |F| scales by sqrt(3)
    rel_close(c.squared, 3 * dfa**2, 1e-9)
    rel_close(c.values, np.sqrt(3) * dfa, 1e-9)
    assert np.all(c.signs == 1)


def test_dcca_2d_self_on_field():
    p = gen_field_2d(256, 0.8, seed=9)
    alpha = dfa_2d(p).exponent
    res = dcca_2d(p, p)
    assert res.lambda_ == pytest.approx(alpha, abs=1e-9)
    assert res.gamma_x == pytest.approx(2 - 2 * alpha, abs=1e-9)


def test_dimension_mismatch(rng):
    with pytest.raises(DimensionMismatch):
        cross_fluctuation_2d(rng.random((40, 40)), rng.random((40, 44)), [5, 6])
    with pytest.raises(DimensionMismatch):
        image_pair_coefficient(RgbImage.from_gray(rng.random((40, 40))),
                               RgbImage.from_gray(rng.random((44, 40))))


# --------------------------------------------------------------------------
# image pairs

def _rgb(seed, size=128):
    return RgbImage.from_arrays(*(gen_field_2d(size, h, seed + k).values
                                  for k, h in enumerate((0.3, 0.5, 0.7))))


def test_image_pair_self():
    img = _rgb(1)
    res = image_pair_coefficient(img, img)
    alphas = channel_exponents(img)
    expected = np.mean([2 - 2 * alphas.alpha(c) for c in (Channel.RED, Channel.GREEN, Channel.BLUE)])
    assert res.gamma_x == pytest.approx(expected, abs=1e-9)
    assert set(res.channels) == {Channel.RED, Channel.GREEN, Channel.BLUE}


def test_mean_gamma():
    assert mean_gamma([1.0, 0.8, 0.6]) == pytest.approx(0.8, abs=1e-15)
    assert mean_gamma([0.37, 0.37, 0.37]) == pytest.approx(0.37, abs=1e-15)


def test_channel_permutation_leaves_mean_unchanged():
    a, b = _rgb(1), _rgb(11)
    perm = lambda im: RgbImage.from_arrays(im.green.values, im.blue.values, im.red.values)
    base = image_pair_coefficient(a, b)
    permuted = image_pair_coefficient(perm(a), perm(b))
    assert permuted.gamma_x == pytest.approx(base.gamma_x, abs=1e-12)
    assert permuted.channels[Channel.RED].gamma_x == base.channels[Channel.GREEN].gamma_x


def test_image_pair_reports_channel_errors(rng):
    a = RgbImage.from_arrays(rng.random((64, 64)), np.ones((64, 64)), rng.random((64, 64)))
    b = RgbImage.from_gray(rng.random((64, 64)))
    res = image_pair_coefficient(a, b)
    assert set(res.errors) == {Channel.GREEN}
    assert res.gamma_x is None
    assert set(res.channels) == {Channel.RED, Channel.BLUE}
