"""Fractal scaling exponents of audio and images, and their cross-modal comparison."""

__version__ = "0.1.0"

from .core import (
    FluctuationCurve,
    LogLogFit,
    PlaneFit,
    ScaleGrid,
    fit_line,
    fit_plane,
    loglog_fit,
    make_scale_grid,
    profile_1d,
    profile_2d,
)
from .dcca import (
    CrossResult,
    ImagePairResult,
    cross_fluctuation_1d,
    cross_fluctuation_2d,
    dcca_1d,
    dcca_2d,
    gamma_from_lambda,
    image_pair_coefficient,
)
from .dfa import (
    ChannelExponents,
    ScalingResult,
    channel_exponents,
    dfa_1d,
    dfa_2d,
    fluctuation_1d,
    fluctuation_2d,
)
from .signals import (
    Channel,
    Modality,
    Plane,
    RgbImage,
    StimulusRecord,
    TimeSeries,
    Valence,
    load_image,
    load_series_csv,
    load_wav,
    to_grayscale,
)

__all__ = [
    "__version__",
    "FluctuationCurve",
    "LogLogFit",
    "PlaneFit",
    "ScaleGrid",
    "fit_line",
    "fit_plane",
    "loglog_fit",
    "make_scale_grid",
    "profile_1d",
    "profile_2d",
    "CrossResult",
    "ImagePairResult",
    "cross_fluctuation_1d",
    "cross_fluctuation_2d",
    "dcca_1d",
    "dcca_2d",
    "gamma_from_lambda",
    "image_pair_coefficient",
    "ChannelExponents",
    "ScalingResult",
    "channel_exponents",
    "dfa_1d",
    "dfa_2d",
    "fluctuation_1d",
    "fluctuation_2d",
    "Channel",
    "Modality",
    "Plane",
    "RgbImage",
    "StimulusRecord",
    "TimeSeries",
    "Valence",
    "load_image",
    "load_series_csv",
    "load_wav",
    "to_grayscale",
]
