"""Batch driver: manifest in, exponents, pair matrices and Pearson block out."""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import __version__
from .core import DEFAULT_N_SCALES, S_MIN, FitRange, ScaleGrid, make_scale_grid
from .dcca import CrossResult, ImagePairResult, dcca_1d, image_pair_coefficient
from .dfa import ChannelExponents, ScalingResult, channel_exponents, dfa_1d
from .errors import (
    DegenerateVector,
    FractalError,
    GroupTooSmall,
    LengthMismatch,
    ManifestError,
)
from .signals import (
    Channel,
    Modality,
    RgbImage,
    StimulusRecord,
    TimeSeries,
    Valence,
    load_image,
    load_series,
)

log = logging.getLogger(__name__)

MANIFEST_SCHEMA_VERSION = 1
REPORT_SCHEMA_VERSION = 1
SAD_THRESHOLD = 1.5
RGB = (Channel.RED, Channel.GREEN, Channel.BLUE)
GROUPS = (Valence.HAPPY, Valence.SAD)


# --------------------------------------------------------------------------
# classification and correlation

def classify_valence(alpha_mean: float) -> Valence:
    """SAD when the (channel-averaged) exponent exceeds 1.5, otherwise HAPPY."""
    if not np.isfinite(alpha_mean):
        raise ValueError(f"exponent must be finite, got {alpha_mean}")
    return Valence.SAD if alpha_mean > SAD_THRESHOLD else Valence.HAPPY


def pearson(u: Sequence[float], v: Sequence[float]) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise LengthMismatch(f"vectors differ in length: {u.shape} vs {v.shape}")
    if len(u) < 2:
        raise GroupTooSmall("pearson needs at least 2 pairs")
    du, dv = u - u.mean(), v - v.mean()
    su, sv = np.dot(du, du), np.dot(dv, dv)
    if su == 0 or sv == 0:
        raise DegenerateVector("vector has zero variance")
    return float(np.clip(np.dot(du, dv) / np.sqrt(su * sv), -1.0, 1.0))


@dataclass(frozen=True)
class PearsonEntry:
    audio_group: Valence
    image_group: Valence
    audio_ids: Tuple[str, ...]
    image_ids: Tuple[str, ...]
    value: Optional[float] = None
    error: Optional[FractalError] = None


LabeledVectors = Mapping[Valence, Sequence[Tuple[str, float]]]


def cross_modal_block(audio_alphas: LabeledVectors, image_alphas: LabeledVectors) -> List[PearsonEntry]:
    """Pearson coefficients between audio and image exponent vectors per valence pair.

    Within each group the vectors are taken in the order given (the
    manifest order), so the k-th audio clip is paired with the k-th image.
    Failures are recorded on the entry instead of raised.
    """
    entries = []
    for ga in GROUPS:
        for gi in GROUPS:
            a = list(audio_alphas.get(ga, ()))
            b = list(image_alphas.get(gi, ()))
            a_ids = tuple(i for i, _ in a)
            b_ids = tuple(i for i, _ in b)
            try:
                if len(a) < 2 or len(b) < 2:
                    raise GroupTooSmall(
                        f"{ga.value} audio has {len(a)}, {gi.value} image has {len(b)} stimuli; need 2 each"
                    )
                value = pearson([x for _, x in a], [x for _, x in b])
                entries.append(PearsonEntry(ga, gi, a_ids, b_ids, value))
            except FractalError as exc:
                entries.append(PearsonEntry(ga, gi, a_ids, b_ids, None, exc))
    return entries


# --------------------------------------------------------------------------
# manifest

@dataclass(frozen=True)
class AnalysisConfig:
    s_min: int = S_MIN
    s_max: Optional[int] = None
    n_scales: int = DEFAULT_N_SCALES
    fit_range: FitRange = None

    def grid(self, min_dim: int) -> ScaleGrid:
        return make_scale_grid(min_dim, self.n_scales, self.s_min, self.s_max)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scales": {"min": self.s_min, "max": self.s_max, "n": self.n_scales},
            "fit_range": list(self.fit_range) if self.fit_range is not None else None,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "AnalysisConfig":
        scales = d.get("scales") or {}
        fit_range = d.get("fit_range")
        try:
            cfg = cls(
                s_min=int(scales.get("min", S_MIN)),
                s_max=None if scales.get("max") is None else int(scales["max"]),
                n_scales=int(scales.get("n", DEFAULT_N_SCALES)),
                fit_range=None if fit_range is None else (float(fit_range[0]), float(fit_range[1])),
            )
        except (TypeError, ValueError, IndexError, AttributeError) as exc:
            raise ManifestError(f"bad analysis config: {exc}") from None
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.s_min < S_MIN:
            raise ManifestError(f"smallest scale must be >= {S_MIN}")
        if self.s_max is not None and self.s_max < self.s_min:
            raise ManifestError("largest scale is below the smallest")
        if self.n_scales < 6:
            raise ManifestError("at least 6 scales are required")
        if self.fit_range is not None and self.fit_range[0] > self.fit_range[1]:
            raise ManifestError("fit range is empty")


@dataclass(frozen=True)
class Manifest:
    stimuli: Tuple[StimulusRecord, ...]
    config: AnalysisConfig = field(default_factory=AnalysisConfig)
    base_dir: Path = Path(".")

    def __post_init__(self):
        if not self.stimuli:
            raise ManifestError("manifest lists no stimuli")
        ids = [s.id for s in self.stimuli]
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise ManifestError(f"duplicate stimulus ids: {dupes}")

    def resolve(self, record: StimulusRecord) -> Path:
        p = Path(record.path)
        return p if p.is_absolute() else self.base_dir / p


def parse_manifest(doc: Any, base_dir: Union[str, Path] = ".") -> Manifest:
    if not isinstance(doc, dict):
        raise ManifestError("manifest must be a JSON object")
    version = doc.get("schema_version", MANIFEST_SCHEMA_VERSION)
    if version != MANIFEST_SCHEMA_VERSION:
        raise ManifestError(f"unsupported manifest schema_version {version}")
    items = doc.get("stimuli")
    if not isinstance(items, list):
        raise ManifestError("manifest needs a 'stimuli' list")
    records = []
    for n, item in enumerate(items):
        try:
            records.append(StimulusRecord(
                id=str(item["id"]),
                modality=Modality(str(item["modality"]).upper()),
                path=str(item["path"]),
                target_valence=Valence(str(item.get("target") or "UNKNOWN").upper()),
                ratings=item.get("ratings") or {},
            ))
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"stimulus #{n}: {exc}") from None
    config = AnalysisConfig.from_dict(doc.get("config") or {})
    return Manifest(tuple(records), config, Path(base_dir))


def load_manifest(path: Union[str, Path]) -> Manifest:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from None
    return parse_manifest(doc, path.parent)


# --------------------------------------------------------------------------
# batch

@dataclass
class StimulusResult:
    record: StimulusRecord
    data: Union[TimeSeries, RgbImage, None] = None
    dfa: Union[ScalingResult, ChannelExponents, None] = None
    alpha_mean: Optional[float] = None
    predicted: Optional[Valence] = None
    error: Optional[Exception] = None

    @property
    def ok(self) -> bool:
        return self.alpha_mean is not None


@dataclass
class PairTable:
    ids: List[str]
    results: Dict[Tuple[int, int], Union[CrossResult, ImagePairResult, Exception]]

    def gamma(self, i: int, j: int) -> Optional[float]:
        r = self.results.get((min(i, j), max(i, j)))
        if isinstance(r, CrossResult):
            return r.gamma_x
        if isinstance(r, ImagePairResult):
            return r.gamma_x
        return None


@dataclass
class Report:
    config: AnalysisConfig
    stimuli: List[StimulusResult]
    audio_pairs: PairTable
    image_pairs: PairTable
    cross_modal: List[PearsonEntry]

    @property
    def all_failed(self) -> bool:
        return not any(s.ok for s in self.stimuli)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "tool": {"name": "fractalmodal", "version": __version__},
            "config": self.config.to_dict(),
            "stimuli": [_stimulus_dict(s) for s in self.stimuli],
            "audio_pairs": _pair_table_dict(self.audio_pairs),
            "image_pairs": _pair_table_dict(self.image_pairs),
            "cross_modal": {
                "pairing": "k-th stimulus of the audio group paired with k-th of the image group, manifest order",
                "threshold": SAD_THRESHOLD,
                "entries": [_pearson_dict(e) for e in self.cross_modal],
            },
        }


def _analyse_stimulus(manifest: Manifest, record: StimulusRecord) -> StimulusResult:
    result = StimulusResult(record)
    path = manifest.resolve(record)
    cfg = manifest.config
    try:
        if record.modality is Modality.AUDIO:
            series = load_series(path)
            result.data = series
            result.dfa = dfa_1d(series, cfg.grid(len(series)), cfg.fit_range)
            result.alpha_mean = result.dfa.exponent
        else:
            image = load_image(path)
            result.data = image
            result.dfa = channel_exponents(image, cfg.grid(min(image.shape)), cfg.fit_range)
            if result.dfa.errors:
                raise next(iter(result.dfa.errors.values()))
            result.alpha_mean = result.dfa.alpha_mean
        result.predicted = classify_valence(result.alpha_mean)
    except (FractalError, OSError) as exc:
        log.warning("stimulus %s failed: %s", record.id, exc)
        result.error = exc
    return result


def _pair(cfg: AnalysisConfig, a: StimulusResult, b: StimulusResult):
    try:
        if isinstance(a.data, TimeSeries):
            if len(a.data) != len(b.data):
                raise LengthMismatch(f"lengths differ: {len(a.data)} vs {len(b.data)}")
            return dcca_1d(a.data, b.data, cfg.grid(len(a.data)), cfg.fit_range)
        return image_pair_coefficient(a.data, b.data, cfg.grid(min(a.data.shape)), cfg.fit_range)
    except FractalError as exc:
        return exc


def _pair_table(cfg, results: List[StimulusResult], pool) -> PairTable:
    n = len(results)
    jobs = [(i, j) for i in range(n) for j in range(i, n) if results[i].ok and results[j].ok]
    computed = pool.map(lambda ij: _pair(cfg, results[ij[0]], results[ij[1]]), jobs)
    return PairTable([r.record.id for r in results], dict(zip(jobs, computed)))


def run_batch(manifest: Manifest, jobs: int = 1) -> Report:
    """Analyse every stimulus and every same-modality pair of a manifest.

    Failures of single stimuli or pairs are kept in the report; they never
    affect other entries.  Output is independent of ``jobs``.
    """
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        stimuli = list(pool.map(lambda r: _analyse_stimulus(manifest, r), manifest.stimuli))
        audio = [s for s in stimuli if s.record.modality is Modality.AUDIO]
        image = [s for s in stimuli if s.record.modality is Modality.IMAGE]
        audio_pairs = _pair_table(manifest.config, audio, pool)
        image_pairs = _pair_table(manifest.config, image, pool)

    def groups(items):
        return {
            g: [(s.record.id, s.alpha_mean) for s in items if s.ok and s.record.target_valence is g]
            for g in GROUPS
        }

    block = cross_modal_block(groups(audio), groups(image))
    return Report(manifest.config, stimuli, audio_pairs, image_pairs, block)


# --------------------------------------------------------------------------
# serialisation

def _error_dict(exc: Optional[BaseException]) -> Optional[Dict[str, str]]:
    if exc is None:
        return None
    return {"type": type(exc).__name__, "message": str(exc)}


def _fit_dict(fit) -> Dict[str, Any]:
    return {
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "n_points": fit.n_points,
        "fit_range": list(fit.fit_range),
    }


def _curve_dict(curve, channel: str) -> Dict[str, Any]:
    return {
        "channel": channel,
        "kind": curve.kind.value,
        "s": curve.scales.tolist(),
        "F": curve.values.tolist(),
        "sign": curve.signs.tolist(),
    }


def _stimulus_dict(s: StimulusResult) -> Dict[str, Any]:
    rec = s.record
    d: Dict[str, Any] = {
        "id": rec.id,
        "modality": rec.modality.value,
        "path": rec.path,
        "target": rec.target_valence.value,
        "ratings": dict(sorted(rec.ratings.items())),
        "dimensions": None,
        "alpha": None,
        "channels": None,
        "alpha_mean": s.alpha_mean,
        "predicted_valence": s.predicted.value if s.predicted else None,
        "curves": [],
        "error": _error_dict(s.error),
    }
    if isinstance(s.data, TimeSeries):
        d["dimensions"] = {"length": len(s.data), "sample_rate_hz": s.data.sample_rate_hz}
    elif isinstance(s.data, RgbImage):
        d["dimensions"] = {"height": s.data.shape[0], "width": s.data.shape[1]}
    if isinstance(s.dfa, ScalingResult):
        d["alpha"] = _fit_dict(s.dfa.fit)
        d["curves"].append(_curve_dict(s.dfa.curve, "MONO"))
    elif isinstance(s.dfa, ChannelExponents):
        d["channels"] = {}
        for c in RGB:
            if c in s.dfa.results:
                d["channels"][c.value] = _fit_dict(s.dfa.results[c].fit)
                d["curves"].append(_curve_dict(s.dfa.results[c].curve, c.value))
            else:
                d["channels"][c.value] = {"error": _error_dict(s.dfa.errors.get(c))}
    return d


def _cross_dict(r: CrossResult) -> Dict[str, Any]:
    return {
        "lambda": r.lambda_,
        "gamma_x": r.gamma_x,
        "r_squared": r.fit.r_squared,
        "sign_consistent": r.sign_consistent,
    }


def _pair_table_dict(t: PairTable) -> Dict[str, Any]:
    n = len(t.ids)
    matrix = [[t.gamma(i, j) for j in range(n)] for i in range(n)]
    pairs = []
    for (i, j), r in sorted(t.results.items()):
        if i == j:
            continue
        entry: Dict[str, Any] = {"a": t.ids[i], "b": t.ids[j], "gamma_x": t.gamma(i, j), "error": None}
        if isinstance(r, CrossResult):
            entry.update(_cross_dict(r))
        elif isinstance(r, ImagePairResult):
            entry["channels"] = {c.value: _cross_dict(r.channels[c]) for c in RGB if c in r.channels}
            if r.errors:
                entry["error"] = {c.value: _error_dict(e) for c, e in r.errors.items()}
        else:
            entry["error"] = _error_dict(r)
        pairs.append(entry)
    return {"ids": list(t.ids), "gamma_x": matrix, "pairs": pairs}


def _pearson_dict(e: PearsonEntry) -> Dict[str, Any]:
    return {
        "audio_group": e.audio_group.value,
        "image_group": e.image_group.value,
        "audio_ids": list(e.audio_ids),
        "image_ids": list(e.image_ids),
        "pearson": e.value,
        "error": _error_dict(e.error),
    }


def report_json(report: Report) -> str:
    return json.dumps(report.to_dict(), indent=2, allow_nan=False) + "\n"


def _fmt(v) -> str:
    if v is None:
        return ""
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def _write_csv(path: Path, header: Sequence[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def emit_report(report: Report, out_dir: Union[str, Path], formats: Sequence[str] = ("json",)) -> List[Path]:
    """Write ``report.json`` and/or the CSV tables into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = report.to_dict()
    written = []
    if "json" in formats:
        p = out / "report.json"
        p.write_text(report_json(report), encoding="utf-8")
        written.append(p)
    if "csv" in formats:
        rows = []
        for s in doc["stimuli"]:
            ch = s["channels"] or {}
            rows.append([
                s["id"], s["modality"], s["target"], s["predicted_valence"],
                s["alpha"]["exponent"] if s["alpha"] else None,
                *[ch.get(c.value, {}).get("exponent") for c in RGB],
                s["alpha_mean"],
                s["error"]["type"] if s["error"] else None,
            ])
        p = out / "exponents.csv"
        _write_csv(p, ["id", "modality", "target", "predicted", "alpha", "alpha_red",
                       "alpha_green", "alpha_blue", "alpha_mean", "error"], rows)
        written.append(p)

        for key in ("audio_pairs", "image_pairs"):
            table = doc[key]
            p = out / f"{key}.csv"
            _write_csv(p, ["id", *table["ids"]],
                       ([i, *row] for i, row in zip(table["ids"], table["gamma_x"])))
            written.append(p)

        p = out / "pearson.csv"
        _write_csv(p, ["audio_group", "image_group", "pearson", "error"],
                   ([e["audio_group"], e["image_group"], e["pearson"],
                     e["error"]["type"] if e["error"] else None]
                    for e in doc["cross_modal"]["entries"]))
        written.append(p)

        p = out / "curves.csv"
        _write_csv(p, ["stimulus_id", "channel", "s", "F", "sign"],
                   ([s["id"], c["channel"], sc, f, sg]
                    for s in doc["stimuli"] for c in s["curves"]
                    for sc, f, sg in zip(c["s"], c["F"], c["sign"])))
        written.append(p)
    return written
