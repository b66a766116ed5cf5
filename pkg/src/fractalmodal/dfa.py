"""Detrended fluctuation analysis of series (1D) and image planes (2D)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Union

import numpy as np

from .core import (
    CurveKind,
    FitRange,
    FluctuationCurve,
    LogLogFit,
    ScaleGrid,
    as_scales,
    line_residuals,
    loglog_fit,
    make_scale_grid,
    plane_residuals,
    profile_1d,
    profile_2d,
)
from .errors import DegenerateInput, FractalError, InputTooSmall, SeriesTooShort
from .signals import Channel, Plane, RgbImage, TimeSeries

GridLike = Union[ScaleGrid, Sequence[int]]


@dataclass(frozen=True, eq=False)
class ScalingResult:
    exponent: float
    fit: LogLogFit
    curve: FluctuationCurve
    channel_tag: Optional[Channel] = None


def _series_values(x) -> np.ndarray:
    return np.asarray(x.samples if isinstance(x, TimeSeries) else x, dtype=np.float64)


def _plane_values(p) -> np.ndarray:
    return np.asarray(p.values if isinstance(p, Plane) else p, dtype=np.float64)


def check_series(v: np.ndarray, scales) -> None:
    if len(v) < 4 * scales[0]:
        raise SeriesTooShort(f"length {len(v)} < 4 * s_min = {4 * scales[0]}")
    if scales[-1] > len(v):
        raise SeriesTooShort(f"scale {scales[-1]} exceeds series length {len(v)}")
    if np.ptp(v) == 0:
        raise DegenerateInput("series is constant")


def check_plane(v: np.ndarray, scales) -> None:
    if min(v.shape) < 4 * scales[0]:
        raise InputTooSmall(f"plane {v.shape} smaller than 4 * s_min = {4 * scales[0]}")
    if scales[-1] > min(v.shape):
        raise InputTooSmall(f"scale {scales[-1]} exceeds plane size {v.shape}")
    if np.ptp(v) == 0:
        raise DegenerateInput("plane is constant")


def default_grid_1d(x) -> ScaleGrid:
    return make_scale_grid(len(_series_values(x)))


def default_grid_2d(p) -> ScaleGrid:
    return make_scale_grid(min(_plane_values(p).shape))


def fluctuation_1d(x, grid: GridLike) -> FluctuationCurve:
    """F(s) from non-overlapping boxes of the profile, linear detrending."""
    v = _series_values(x)
    scales = as_scales(grid)
    check_series(v, scales)
    prof = profile_1d(v)
    f2 = [np.mean(line_residuals(prof, s) ** 2) for s in scales]
    if not np.any(f2):
        raise DegenerateInput("F(s) vanishes at every scale")
    return FluctuationCurve.from_squared(scales, f2, CurveKind.DFA1D)


def fluctuation_2d(p, grid: GridLike) -> FluctuationCurve:
    """F(s) from disjoint s x s windows of the 2D profile, planar detrending.

    Each window's F^2(l, s) is its mean squared residual; F(s)^2 is the
    mean of those over the L_s windows.
    """
    v = _plane_values(p)
    scales = as_scales(grid)
    check_plane(v, scales)
    prof = profile_2d(v)
    f2 = [np.mean(np.mean(plane_residuals(prof, s) ** 2, axis=(1, 2))) for s in scales]
    if not np.any(f2):
        raise DegenerateInput("F(s) vanishes at every scale")
    return FluctuationCurve.from_squared(scales, f2, CurveKind.DFA2D)


def dfa_1d(x, grid: Optional[GridLike] = None, fit_range: FitRange = None) -> ScalingResult:
    """Scaling exponent alpha of a series.

    >>> import numpy as np
    >>> x = np.random.default_rng(1).standard_normal(4096)
    >>> 0.4 < dfa_1d(x).exponent < 0.6
    True
    """
    if grid is None:
        grid = default_grid_1d(x)
    curve = fluctuation_1d(x, grid)
    fit = loglog_fit(curve, fit_range)
    return ScalingResult(fit.exponent, fit, curve)


def dfa_2d(p, grid: Optional[GridLike] = None, fit_range: FitRange = None) -> ScalingResult:
    if grid is None:
        grid = default_grid_2d(p)
    curve = fluctuation_2d(p, grid)
    fit = loglog_fit(curve, fit_range)
    tag = p.channel_tag if isinstance(p, Plane) else None
    return ScalingResult(fit.exponent, fit, curve, tag)


@dataclass(frozen=True, eq=False)
class ChannelExponents:
    """Per-channel DFA results for an RGB image.

    A channel that could not be analysed has no entry in ``results`` and
    its exception in ``errors``.
    """

    results: Dict[Channel, ScalingResult]
    errors: Dict[Channel, FractalError] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.errors

    def alpha(self, channel: Channel) -> float:
        if channel in self.errors:
            raise self.errors[channel]
        return self.results[channel].exponent

    @property
    def alpha_mean(self) -> float:
        """Unweighted mean of the red, green and blue exponents."""
        return float(np.mean([self.alpha(c) for c in (Channel.RED, Channel.GREEN, Channel.BLUE)]))


def channel_exponents(
    img: RgbImage, grid: Optional[GridLike] = None, fit_range: FitRange = None
) -> ChannelExponents:
    if grid is None:
        grid = default_grid_2d(img.red)
    results, errors = {}, {}
    for plane in img.planes():
        try:
            results[plane.channel_tag] = dfa_2d(plane, grid, fit_range)
        except FractalError as exc:
            errors[plane.channel_tag] = exc
    return ChannelExponents(results, errors)
