"""Domain types for stimuli and their ingestion from disk.

Audio is read from 16-bit PCM WAV, images from binary or ASCII Netpbm
(PGM/PPM, maxval 255), and plain numeric series from one-value-per-line
text files.  All loaders return immutable values.
"""

from __future__ import annotations

import struct
import wave
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Mapping, Optional, Union

import numpy as np

from .errors import (
    MalformedHeader,
    MalformedPixelData,
    NotWav,
    ParseError,
    TruncatedFile,
    TruncatedPixelData,
    UnsupportedEncoding,
    UnsupportedFormat,
)

PathLike = Union[str, Path]

PCM_SCALE = 32768.0
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class Channel(str, Enum):
    RED = "RED"
    GREEN = "GREEN"
    BLUE = "BLUE"
    GRAY = "GRAY"


class Modality(str, Enum):
    AUDIO = "AUDIO"
    IMAGE = "IMAGE"


class Valence(str, Enum):
    HAPPY = "HAPPY"
    SAD = "SAD"
    UNKNOWN = "UNKNOWN"


def _frozen_array(values, ndim: int, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{what} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains NaN or Inf")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A real-valued 1D signal.

    Length requirements of the estimators (at least 2 samples, and
    4 * s_min for DFA) are checked by the estimators, not here, so that
    short fixtures can still be loaded and inspected.
    """

    samples: np.ndarray
    sample_rate_hz: int = 1
    source_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen_array(self.samples, 1, "samples"))
        if int(self.sample_rate_hz) <= 0:
            raise ValueError("sample_rate_hz must be positive")
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True, eq=False)
class Plane:
    """One image channel (or a grayscale image) as an M x N float matrix."""

    values: np.ndarray
    channel_tag: Channel = Channel.GRAY

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, 2, "plane"))
        object.__setattr__(self, "channel_tag", Channel(self.channel_tag))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def transpose(self) -> "Plane":
        return Plane(self.values.T, self.channel_tag)


@dataclass(frozen=True, eq=False)
class RgbImage:
    red: Plane
    green: Plane
    blue: Plane
    source_id: str = ""

    def __post_init__(self):
        shapes = {self.red.shape, self.green.shape, self.blue.shape}
        if len(shapes) != 1:
            raise ValueError(f"channel planes differ in size: {sorted(shapes)}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.red.shape

    def planes(self) -> tuple[Plane, Plane, Plane]:
        return self.red, self.green, self.blue

    @classmethod
    def from_arrays(cls, red, green, blue, source_id: str = "") -> "RgbImage":
        return cls(
            Plane(red, Channel.RED),
            Plane(green, Channel.GREEN),
            Plane(blue, Channel.BLUE),
            source_id,
        )

    @classmethod
    def from_gray(cls, values, source_id: str = "") -> "RgbImage":
        return cls.from_arrays(values, values, values, source_id)


@dataclass(frozen=True)
class StimulusRecord:
    id: str
    modality: Modality
    path: str
    target_valence: Valence = Valence.UNKNOWN
    ratings: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "modality", Modality(self.modality))
        object.__setattr__(self, "target_valence", Valence(self.target_valence))
        ratings = {str(k): float(v) for k, v in dict(self.ratings).items()}
        for name, value in ratings.items():
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"rating {name!r} of {self.id!r} must be a finite value >= 0")
        object.__setattr__(self, "ratings", ratings)


# --------------------------------------------------------------------------
# WAV

def _read_bytes(path: PathLike) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def load_wav(path: PathLike) -> TimeSeries:
    """Load a 16-bit PCM WAV file as a mono series scaled to [-1, 1).

    Multi-channel frames are mixed down by taking the mean of the channels.
    Chunks other than ``fmt `` and ``data`` are skipped.
    """
    data = _read_bytes(path)
    if len(data) < 4 or data[:4] != b"RIFF":
        raise NotWav(f"{path}: missing RIFF magic")
    if len(data) < 12:
        raise TruncatedFile(f"{path}: RIFF header cut short")
    if data[8:12] != b"WAVE":
        raise NotWav(f"{path}: RIFF form type is not WAVE")

    fmt = None
    pcm = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos:pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8:pos + 8 + size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise TruncatedFile(f"{path}: fmt chunk cut short")
            fmt = struct.unpack_from("<HHIIHH", body)
        elif chunk_id == b"data":
            if len(body) < size:
                raise TruncatedFile(f"{path}: data chunk declares {size} bytes, {len(body)} present")
            pcm = body
        pos += 8 + size + (size & 1)
        if fmt is not None and pcm is not None:
            break

    if fmt is None:
        raise TruncatedFile(f"{path}: no fmt chunk")
    format_code, channels, rate, _, block_align, bits = fmt
    if format_code != 1:
        raise UnsupportedEncoding(f"{path}: format code {format_code} is not PCM")
    if bits != 16:
        raise UnsupportedEncoding(f"{path}: {bits}-bit samples, only 16-bit is supported")
    if channels < 1 or block_align != 2 * channels or rate <= 0:
        raise UnsupportedEncoding(f"{path}: inconsistent fmt chunk")
    if pcm is None:
        raise TruncatedFile(f"{path}: no data chunk")
    if len(pcm) % block_align:
        raise TruncatedFile(f"{path}: data ends in a partial frame")

    frames = np.frombuffer(pcm, dtype="<i2").reshape(-1, channels).astype(np.float64)
    mono = frames.mean(axis=1) / PCM_SCALE
    return TimeSeries(mono, rate, str(path))


def write_wav(series: TimeSeries, path: PathLike) -> None:
    """Write a series as mono 16-bit PCM; samples must already lie in [-1, 1]."""
    x = np.asarray(series.samples)
    if np.max(np.abs(x)) > 1.0:
        raise ValueError("samples exceed [-1, 1]; rescale before writing")
    ints = np.clip(np.round(x * PCM_SCALE), -32768, 32767).astype("<i2")
    with wave.open(str(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(series.sample_rate_hz)
        wf.writeframes(ints.tobytes())


# --------------------------------------------------------------------------
# Netpbm

_PNM_KINDS = {b"P2": (1, False), b"P3": (3, False), b"P5": (1, True), b"P6": (3, True)}


def _skip_space_and_comments(data: bytes, pos: int) -> int:
    while pos < len(data):
        ch = data[pos:pos + 1]
        if ch == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        elif ch.isspace():
            pos += 1
        else:
            break
    return pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    pos = _skip_space_and_comments(data, pos)
    start = pos
    while pos < len(data) and data[pos:pos + 1].isdigit():
        pos += 1
    if start == pos:
        raise MalformedHeader(f"expected {what}")
    if pos < len(data) and not (data[pos:pos + 1].isspace() or data[pos:pos + 1] == b"#"):
        raise MalformedHeader(f"bad {what}")
    return int(data[start:pos]), pos


def parse_pnm(data: bytes, source_id: str = "") -> RgbImage:
    magic = data[:2]
    if magic not in _PNM_KINDS:
        raise UnsupportedFormat(f"unsupported Netpbm magic {magic!r}")
    n_channels, binary = _PNM_KINDS[magic]

    width, pos = _header_int(data, 2, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if width <= 0 or height <= 0 or maxval <= 0:
        raise MalformedHeader("width, height and maxval must be positive")
    if maxval != 255:
        raise UnsupportedFormat(f"maxval {maxval}; only 8-bit (255) images are supported")

    count = width * height * n_channels
    if binary:
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise MalformedHeader("missing whitespace before pixel data")
        raw = data[pos + 1:pos + 1 + count]
        if len(raw) < count:
            raise TruncatedPixelData(f"expected {count} samples, found {len(raw)}")
        pixels = np.frombuffer(raw, dtype=np.uint8).astype(np.float64)
    else:
        tokens = []
        body = data[pos:]
        for line in body.split(b"\n"):
            tokens.extend(line.split(b"#", 1)[0].split())
        if len(tokens) < count:
            raise TruncatedPixelData(f"expected {count} samples, found {len(tokens)}")
        try:
            pixels = np.array([int(t) for t in tokens[:count]], dtype=np.float64)
        except ValueError:
            raise MalformedPixelData("non-integer sample in ASCII pixel data") from None
        if pixels.min() < 0 or pixels.max() > maxval:
            raise MalformedPixelData(f"sample outside 0..{maxval}")

    if n_channels == 1:
        return RgbImage.from_gray(pixels.reshape(height, width), source_id)
    rgb = pixels.reshape(height, width, 3)
    return RgbImage.from_arrays(rgb[..., 0], rgb[..., 1], rgb[..., 2], source_id)


def load_image(path: PathLike) -> RgbImage:
    """Load a PGM (P2/P5) or PPM (P3/P6) file with maxval 255.

    Grayscale files are replicated into identical R, G and B planes.
    """
    return parse_pnm(_read_bytes(path), str(path))


def _as_bytes_plane(values: np.ndarray) -> np.ndarray:
    v = np.asarray(values)
    if v.min() < 0 or v.max() > 255 or not np.array_equal(v, np.round(v)):
        raise ValueError("pixel values must be integers in 0..255")
    return v.astype(np.uint8)


def write_pnm(image: Union[RgbImage, Plane], path: PathLike, binary: bool = True) -> None:
    """Write a Plane as PGM or an RgbImage as PPM (P5/P6, or P2/P3 if not binary)."""
    if isinstance(image, Plane):
        pixels = _as_bytes_plane(image.values)
        magic = b"P5" if binary else b"P2"
    else:
        pixels = np.stack([_as_bytes_plane(p.values) for p in image.planes()], axis=-1)
        magic = b"P6" if binary else b"P3"
    height, width = pixels.shape[:2]
    header = magic + b"\n%d %d\n255\n" % (width, height)
    if binary:
        body = pixels.tobytes()
    else:
        rows = pixels.reshape(height, -1)
        body = b"".join(b" ".join(b"%d" % v for v in row) + b"\n" for row in rows)
    with open(path, "wb") as fh:
        fh.write(header + body)


def to_grayscale(img: RgbImage) -> Plane:
    """BT.601 luma, kept real-valued."""
    wr, wg, wb = LUMA_WEIGHTS
    r, g, b = (p.values for p in img.planes())
    if np.array_equal(r, g) and np.array_equal(g, b):
        return Plane(r, Channel.GRAY)
    luma = wr * r + wg * g + wb * b
    # rounding in the weighted sum must not leave the channel range
    lo = np.minimum(np.minimum(r, g), b)
    hi = np.maximum(np.maximum(r, g), b)
    return Plane(np.clip(luma, lo, hi), Channel.GRAY)


# --------------------------------------------------------------------------
# plain series

def parse_series_text(text: str, source_id: str = "", sample_rate_hz: int = 1) -> TimeSeries:
    values = []
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    for lineno, line in enumerate(lines, start=1):
        token = line.strip()
        if lineno == 1 and token.lower() == "value":
            continue
        try:
            v = float(token)
        except ValueError:
            raise ParseError(lineno, f"not a number: {token!r}") from None
        if not np.isfinite(v):
            raise ParseError(lineno, "value is not finite")
        values.append(v)
    if not values:
        raise ParseError(len(lines) + 1, "no values")
    return TimeSeries(values, sample_rate_hz, source_id)


def load_series_csv(path: PathLike, sample_rate_hz: int = 1) -> TimeSeries:
    """Read one number per line, with an optional ``value`` header line."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    return parse_series_text(text, str(path), sample_rate_hz)


AUDIO_SUFFIXES = {".wav", ".csv", ".txt"}
IMAGE_SUFFIXES = {".pgm", ".ppm", ".pnm"}


def load_series(path: PathLike) -> TimeSeries:
    if Path(path).suffix.lower() == ".wav":
        return load_wav(path)
    return load_series_csv(path)


def guess_modality(path: PathLike) -> Optional[Modality]:
    suffix = Path(path).suffix.lower()
    if suffix in AUDIO_SUFFIXES:
        return Modality.AUDIO
    if suffix in IMAGE_SUFFIXES:
        return Modality.IMAGE
    return None
