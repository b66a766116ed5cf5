"""Numerical kernels: profiles, scale grids, line/plane fits, log-log fits.

Window regressions use 1-based local coordinates (1..s along each axis),
so a window's fit does not depend on where the window sits in the profile.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DegenerateRegressor,
    InputTooSmall,
    NonPositiveFluctuation,
    TooFewScales,
)
from .signals import Plane, TimeSeries

log = logging.getLogger(__name__)

S_MIN = 5
DEFAULT_N_SCALES = 20
MIN_FIT_POINTS = 6

FitRange = Optional[Tuple[float, float]]


# --------------------------------------------------------------------------
# profiles

def profile_1d(x: Union[TimeSeries, np.ndarray]) -> np.ndarray:
    """Cumulative sum of mean-removed samples."""
    v = np.asarray(x.samples if isinstance(x, TimeSeries) else x, dtype=np.float64)
    if v.ndim != 1 or len(v) < 2:
        raise InputTooSmall("a profile needs at least 2 samples")
    return np.cumsum(v - v.mean())


def profile_2d(p: Union[Plane, np.ndarray]) -> np.ndarray:
    """Double cumulative sum of mean-removed pixels, x[i, j] = sum_{n<=i, m<=j}."""
    v = np.asarray(p.values if isinstance(p, Plane) else p, dtype=np.float64)
    if v.ndim != 2:
        raise ValueError("profile_2d expects a matrix")
    return np.cumsum(np.cumsum(v - v.mean(), axis=0), axis=1)


# --------------------------------------------------------------------------
# scale grids

@dataclass(frozen=True)
class ScaleGrid:
    scales: Tuple[int, ...]

    def __post_init__(self):
        scales = tuple(int(s) for s in self.scales)
        object.__setattr__(self, "scales", scales)
        if len(scales) < MIN_FIT_POINTS:
            raise InputTooSmall(
                f"scale grid has {len(scales)} scales, at least {MIN_FIT_POINTS} are needed"
            )
        if scales[0] < S_MIN:
            raise InputTooSmall(f"smallest scale {scales[0]} is below {S_MIN}")
        if any(b <= a for a, b in zip(scales, scales[1:])):
            raise ValueError("scales must be strictly increasing")

    @property
    def s_min(self) -> int:
        return self.scales[0]

    @property
    def s_max(self) -> int:
        return self.scales[-1]

    def __iter__(self):
        return iter(self.scales)

    def __len__(self) -> int:
        return len(self.scales)


def make_scale_grid(
    min_dim: int,
    n_scales: int = DEFAULT_N_SCALES,
    s_min: int = S_MIN,
    s_max: Optional[int] = None,
) -> ScaleGrid:
    """Integer scales spaced roughly geometrically from ``s_min`` to ``min_dim // 4``.

    ``s_max`` may lower the upper end; it is clipped to ``min_dim // 4``.
    Rounding duplicates are dropped, so the grid can hold fewer than
    ``n_scales`` points.
    """
    upper = int(min_dim) // 4
    if s_max is not None:
        upper = min(upper, int(s_max))
    if s_min < S_MIN:
        raise InputTooSmall(f"s_min must be at least {S_MIN}")
    if upper < s_min:
        raise InputTooSmall(f"min dimension {min_dim} leaves no scale in [{s_min}, {upper}]")
    if n_scales < MIN_FIT_POINTS:
        raise TooFewScales(f"n_scales must be at least {MIN_FIT_POINTS}")
    scales = np.unique(np.round(np.geomspace(s_min, upper, n_scales)).astype(int))
    return ScaleGrid(tuple(scales.tolist()))


def as_scales(grid: Union[ScaleGrid, Sequence[int]]) -> Tuple[int, ...]:
    scales = tuple(int(s) for s in grid)
    if not scales:
        raise TooFewScales("empty scale list")
    if scales[0] < 2 or any(b <= a for a, b in zip(scales, scales[1:])):
        raise ValueError("scales must be strictly increasing integers >= 2")
    return scales


# --------------------------------------------------------------------------
# least-squares fits

def fit_line(t: Sequence[float], y: Sequence[float]) -> Tuple[float, float]:
    """OLS slope and intercept of ``y`` against ``t``."""
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if t.shape != y.shape or t.ndim != 1 or len(t) < 2:
        raise ValueError("fit_line needs two 1D sequences of equal length >= 2")
    tc = t - t.mean()
    sxx = np.dot(tc, tc)
    if sxx == 0:
        raise DegenerateRegressor("regressor is constant")
    slope = np.dot(tc, y - y.mean()) / sxx
    return float(slope), float(y.mean() - slope * t.mean())


@dataclass(frozen=True)
class PlaneFit:
    a: float
    b: float
    c: float

    def evaluate(self, s_rows: int, s_cols: int) -> np.ndarray:
        i = np.arange(1, s_rows + 1)[:, None]
        j = np.arange(1, s_cols + 1)[None, :]
        return self.a * i + self.b * j + self.c


def fit_plane(window) -> PlaneFit:
    """Least-squares plane a*i + b*j + c over a square window.

    ``i`` indexes rows and ``j`` columns, both 1-based.
    """
    w = np.asarray(window, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 2:
        raise ValueError("fit_plane needs a square window of side >= 2")
    s = w.shape[0]
    i, j = np.meshgrid(np.arange(1, s + 1), np.arange(1, s + 1), indexing="ij")
    i, j, z = i.ravel().astype(float), j.ravel().astype(float), w.ravel()
    n = float(s * s)
    normal = np.array([
        [np.dot(i, i), np.dot(i, j), i.sum()],
        [np.dot(j, i), np.dot(j, j), j.sum()],
        [i.sum(), j.sum(), n],
    ])
    rhs = np.array([np.dot(i, z), np.dot(j, z), z.sum()])
    a, b, c = np.linalg.solve(normal, rhs)
    return PlaneFit(float(a), float(b), float(c))


def line_residuals(profile: np.ndarray, s: int) -> np.ndarray:
    """Residuals of per-box line fits, shape ``(floor(len/s), s)``.

    Boxes start at the left edge; the trailing remainder is dropped.
    """
    n_boxes = len(profile) // s
    boxes = profile[:n_boxes * s].reshape(n_boxes, s)
    t = np.arange(s) - (s - 1) / 2.0
    slope = boxes @ t / np.dot(t, t)
    return boxes - boxes.mean(axis=1, keepdims=True) - slope[:, None] * t


def plane_residuals(profile: np.ndarray, s: int) -> np.ndarray:
    """Residuals of per-window plane fits, shape ``(L_s, s, s)``.

    Windows tile the profile from the top-left corner in row-major order;
    the right and bottom remainders are dropped.  On a full square grid the
    centered regressors are orthogonal, so the normal equations decouple.
    """
    rows, cols = profile.shape[0] // s, profile.shape[1] // s
    windows = (
        profile[:rows * s, :cols * s]
        .reshape(rows, s, cols, s)
        .swapaxes(1, 2)
        .reshape(rows * cols, s, s)
    )
    t = np.arange(s) - (s - 1) / 2.0
    denom = s * np.dot(t, t)
    a = np.einsum("lij,i->l", windows, t) / denom
    b = np.einsum("lij,j->l", windows, t) / denom
    mean = windows.mean(axis=(1, 2))
    return (
        windows
        - mean[:, None, None]
        - a[:, None, None] * t[None, :, None]
        - b[:, None, None] * t[None, None, :]
    )


# --------------------------------------------------------------------------
# fluctuation curves and power-law fits

class CurveKind(str, Enum):
    DFA1D = "DFA1D"
    DFA2D = "DFA2D"
    DCCA1D = "DCCA1D"
    DCCA2D = "DCCA2D"


@dataclass(frozen=True, eq=False)
class FluctuationCurve:
    """Measured F(s) at each scale.

    ``signs`` holds the sign of the mean squared quantity before the square
    root: always +1 for DFA, the sign of the detrended covariance for DCCA
    (0 where it vanishes exactly).
    """

    scales: np.ndarray
    values: np.ndarray
    signs: np.ndarray
    kind: CurveKind

    def __post_init__(self):
        scales = np.asarray(self.scales, dtype=np.int64)
        values = np.asarray(self.values, dtype=np.float64)
        signs = np.asarray(self.signs, dtype=np.int8)
        if not (scales.shape == values.shape == signs.shape) or scales.ndim != 1:
            raise ValueError("scales, values and signs must be 1D and of equal length")
        if np.any(np.diff(scales) <= 0):
            raise ValueError("scales must be strictly increasing")
        if np.any(values < 0):
            raise ValueError("fluctuation magnitudes must be >= 0")
        for arr in (scales, values, signs):
            arr.flags.writeable = False
        object.__setattr__(self, "scales", scales)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "kind", CurveKind(self.kind))

    @classmethod
    def from_squared(cls, scales, squared, kind: CurveKind) -> "FluctuationCurve":
        squared = np.asarray(squared, dtype=np.float64)
        return cls(scales, np.sqrt(np.abs(squared)), np.sign(squared).astype(np.int8), kind)

    @property
    def squared(self) -> np.ndarray:
        """Signed F^2(s)."""
        return self.signs * self.values ** 2

    def __len__(self) -> int:
        return len(self.scales)

    def points(self):
        return list(zip(self.scales.tolist(), self.values.tolist()))


@dataclass(frozen=True)
class LogLogFit:
    exponent: float
    intercept: float
    r_squared: float
    n_points: int
    fit_range: Tuple[int, int]
    residuals: Tuple[float, ...]


def in_fit_range(scales: np.ndarray, fit_range: FitRange) -> np.ndarray:
    if fit_range is None:
        return np.ones(len(scales), dtype=bool)
    lo, hi = fit_range
    if lo > hi:
        raise ValueError(f"empty fit range {fit_range}")
    return (scales >= lo) & (scales <= hi)


def power_law_fit(scales, values) -> LogLogFit:
    """OLS fit of ln(values) against ln(scales)."""
    s = np.asarray(scales, dtype=np.float64)
    f = np.asarray(values, dtype=np.float64)
    if len(s) < MIN_FIT_POINTS:
        raise TooFewScales(f"{len(s)} points in fit range, need {MIN_FIT_POINTS}")
    if np.any(f <= 0):
        bad = s[f <= 0].astype(int).tolist()
        raise NonPositiveFluctuation(f"F(s) <= 0 at scales {bad}")
    ls, lf = np.log(s), np.log(f)
    slope, intercept = fit_line(ls, lf)
    resid = lf - (slope * ls + intercept)
    ss_res = float(np.dot(resid, resid))
    lf_c = lf - lf.mean()
    ss_tot = float(np.dot(lf_c, lf_c))
    if ss_tot == 0.0:
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    if not np.isfinite(slope):
        raise NonPositiveFluctuation("fitted exponent is not finite")
    return LogLogFit(
        exponent=slope,
        intercept=intercept,
        r_squared=r2,
        n_points=len(s),
        fit_range=(int(s[0]), int(s[-1])),
        residuals=tuple(resid.tolist()),
    )


def loglog_fit(curve: FluctuationCurve, fit_range: FitRange = None) -> LogLogFit:
    """Slope of ln F(s) against ln s over the scales inside ``fit_range``."""
    mask = in_fit_range(curve.scales, fit_range)
    return power_law_fit(curve.scales[mask], curve.values[mask])
