"""Seeded generators of signals and planes with known scaling exponents.

All randomness comes from NumPy's ``Generator`` over the PCG64 bit
generator, seeded with a 64-bit unsigned integer; Gaussian draws use
NumPy's ziggurat sampler.  Same arguments and seed give bit-identical
output on the same build.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidHurst, InvalidSize
from .signals import Channel, Plane, TimeSeries

SEED_MAX = 2**64 - 1

# Amplitude spectrum of gen_field_2d is |k|^-(H - 1/2 + 1 + FIELD_EXPONENT_OFFSET).
# Frozen output of scripts/calibrate_field2d.py; rerun it if the 2D-DFA
# defaults (grid, detrending) change.
FIELD_EXPONENT_OFFSET = -1.027


def make_rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def _check_hurst(hurst: float) -> float:
    hurst = float(hurst)
    if not 0.0 < hurst < 1.0:
        raise InvalidHurst(f"hurst must lie in (0, 1), got {hurst}")
    return hurst


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _unit_variance(x: np.ndarray) -> np.ndarray:
    x = x - x.mean()
    return x / x.std()


def gen_white_noise_1d(length: int, seed: int) -> TimeSeries:
    if length < 16:
        raise InvalidSize(f"length must be >= 16, got {length}")
    x = make_rng(seed).standard_normal(int(length))
    return TimeSeries(x, 1, f"noise1d(seed={seed})")


def spectral_noise_1d(length: int, amplitude_exponent: float, seed: int) -> np.ndarray:
    """Gaussian noise whose amplitude spectrum falls as f^-amplitude_exponent.

    Complex Gaussian Fourier coefficients are shaped and inverse-transformed;
    the zero-frequency term is dropped.  Output has zero mean, unit variance.
    """
    rng = make_rng(seed)
    freqs = np.fft.rfftfreq(length)
    amp = np.zeros_like(freqs)
    amp[1:] = freqs[1:] ** (-amplitude_exponent)
    coef = (rng.standard_normal(len(freqs)) + 1j * rng.standard_normal(len(freqs))) * amp
    return _unit_variance(np.fft.irfft(coef, length))


def gen_fgn_1d(length: int, hurst: float, seed: int) -> TimeSeries:
    """Fractional Gaussian noise by spectral synthesis, DFA alpha ~ hurst.

    >>> len(gen_fgn_1d(1024, 0.7, seed=3))
    1024
    """
    hurst = _check_hurst(hurst)
    if not _is_pow2(length) or length < 2**10:
        raise InvalidSize(f"length must be a power of two >= 1024, got {length}")
    x = spectral_noise_1d(length, (2 * hurst - 1) / 2, seed)
    return TimeSeries(x, 1, f"fgn1d(H={hurst}, seed={seed})")


def spectral_field_2d(size: int, amplitude_exponent: float, seed: int) -> np.ndarray:
    """Isotropic Gaussian field with amplitude spectrum |k|^-amplitude_exponent."""
    rng = make_rng(seed)
    ky = np.fft.fftfreq(size)[:, None]
    kx = np.fft.rfftfreq(size)[None, :]
    k = np.hypot(ky, kx)
    amp = np.zeros_like(k)
    amp[k > 0] = k[k > 0] ** (-amplitude_exponent)
    coef = (rng.standard_normal(k.shape) + 1j * rng.standard_normal(k.shape)) * amp
    return _unit_variance(np.fft.irfft2(coef, (size, size)))


def field_amplitude_exponent(hurst: float) -> float:
    return hurst - 0.5 + 1.0 + FIELD_EXPONENT_OFFSET


def gen_field_2d(size: int, hurst: float, seed: int) -> Plane:
    """Square increment field whose 2D-DFA exponent is calibrated to ``hurst``."""
    hurst = _check_hurst(hurst)
    if not _is_pow2(size) or size < 128:
        raise InvalidSize(f"size must be a power of two >= 128, got {size}")
    return Plane(spectral_field_2d(size, field_amplitude_exponent(hurst), seed), Channel.GRAY)


def to_pcm_range(x: np.ndarray, peak: float = 0.9) -> np.ndarray:
    """Rescale so the largest magnitude equals ``peak``."""
    x = np.asarray(x, dtype=np.float64)
    return x * (peak / np.max(np.abs(x)))


def to_byte_range(x: np.ndarray) -> np.ndarray:
    """Min-max rescale to 0..255 and round to integers (as floats)."""
    x = np.asarray(x, dtype=np.float64)
    lo, hi = x.min(), x.max()
    return np.round((x - lo) * (255.0 / (hi - lo)))
