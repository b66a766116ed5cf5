"""Detrended cross-correlation analysis between two series or two planes.

The detrended covariance F^2(s) can be negative.  Curves keep its sign
and fits use ln|F|; gamma_x = 2 - 2 * lambda.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from .core import (
    MIN_FIT_POINTS,
    CurveKind,
    FitRange,
    FluctuationCurve,
    LogLogFit,
    as_scales,
    in_fit_range,
    line_residuals,
    plane_residuals,
    power_law_fit,
    profile_1d,
    profile_2d,
)
from .dfa import (
    GridLike,
    _plane_values,
    _series_values,
    check_plane,
    check_series,
    default_grid_1d,
    default_grid_2d,
)
from .errors import (
    AllZeroCrossFluctuation,
    DimensionMismatch,
    FractalError,
    LengthMismatch,
    TooFewScales,
)
from .signals import Channel, RgbImage

log = logging.getLogger(__name__)


def gamma_from_lambda(lam: float) -> float:
    return 2.0 - 2.0 * lam


@dataclass(frozen=True, eq=False)
class CrossResult:
    lambda_: float
    gamma_x: float
    fit: LogLogFit
    curve: FluctuationCurve
    sign_consistent: bool


def cross_fluctuation_1d(x, y, grid: GridLike) -> FluctuationCurve:
    u, v = _series_values(x), _series_values(y)
    if len(u) != len(v):
        raise LengthMismatch(f"series lengths differ: {len(u)} vs {len(v)}")
    scales = as_scales(grid)
    check_series(u, scales)
    check_series(v, scales)
    pu, pv = profile_1d(u), profile_1d(v)
    f2 = [np.mean(line_residuals(pu, s) * line_residuals(pv, s)) for s in scales]
    return FluctuationCurve.from_squared(scales, f2, CurveKind.DCCA1D)


def cross_fluctuation_2d(a, b, grid: GridLike) -> FluctuationCurve:
    u, v = _plane_values(a), _plane_values(b)
    if u.shape != v.shape:
        raise DimensionMismatch(f"plane shapes differ: {u.shape} vs {v.shape}")
    scales = as_scales(grid)
    check_plane(u, scales)
    check_plane(v, scales)
    pu, pv = profile_2d(u), profile_2d(v)
    f2 = []
    for s in scales:
        prod = plane_residuals(pu, s) * plane_residuals(pv, s)
        f2.append(np.mean(np.mean(prod, axis=(1, 2))))
    return FluctuationCurve.from_squared(scales, f2, CurveKind.DCCA2D)


def cross_fit(curve: FluctuationCurve, fit_range: FitRange = None) -> CrossResult:
    """Fit ln|F| over in-range scales with a nonzero covariance."""
    in_range = in_fit_range(curve.scales, fit_range)
    nonzero = curve.signs != 0
    if not np.any(in_range & nonzero):
        raise AllZeroCrossFluctuation("detrended covariance is zero at every scale")
    dropped = curve.scales[in_range & ~nonzero]
    if len(dropped):
        log.info("excluding scales with zero covariance from the fit: %s", dropped.tolist())
    keep = in_range & nonzero
    if keep.sum() < MIN_FIT_POINTS:
        raise TooFewScales(f"{keep.sum()} usable scales, need {MIN_FIT_POINTS}")
    fit = power_law_fit(curve.scales[keep], curve.values[keep])
    used = curve.signs[keep]
    return CrossResult(
        lambda_=fit.exponent,
        gamma_x=gamma_from_lambda(fit.exponent),
        fit=fit,
        curve=curve,
        sign_consistent=bool(np.all(used == used[0])),
    )


def dcca_1d(x, y, grid: Optional[GridLike] = None, fit_range: FitRange = None) -> CrossResult:
    if grid is None:
        grid = default_grid_1d(x)
    return cross_fit(cross_fluctuation_1d(x, y, grid), fit_range)


def dcca_2d(a, b, grid: Optional[GridLike] = None, fit_range: FitRange = None) -> CrossResult:
    if grid is None:
        grid = default_grid_2d(a)
    return cross_fit(cross_fluctuation_2d(a, b, grid), fit_range)


@dataclass(frozen=True, eq=False)
class ImagePairResult:
    """Same-channel DCCA results for two RGB images.

    ``gamma_x`` is the mean of the three channel gamma_x values; it is None
    when any channel failed.
    """

    channels: Dict[Channel, CrossResult]
    errors: Dict[Channel, FractalError] = field(default_factory=dict)

    @property
    def gamma_x(self) -> Optional[float]:
        if self.errors or len(self.channels) != 3:
            return None
        return mean_gamma([r.gamma_x for r in self.channels.values()])


def mean_gamma(values) -> float:
    return float(np.mean(np.asarray(values, dtype=np.float64)))


def image_pair_coefficient(
    a: RgbImage, b: RgbImage, grid: Optional[GridLike] = None, fit_range: FitRange = None
) -> ImagePairResult:
    if a.shape != b.shape:
        raise DimensionMismatch(f"image sizes differ: {a.shape} vs {b.shape}")
    if grid is None:
        grid = default_grid_2d(a.red)
    channels, errors = {}, {}
    for pa, pb in zip(a.planes(), b.planes()):
        try:
            channels[pa.channel_tag] = dcca_2d(pa, pb, grid, fit_range)
        except FractalError as exc:
            errors[pa.channel_tag] = exc
    return ImagePairResult(channels, errors)
