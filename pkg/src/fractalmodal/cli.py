"""Command line interface.

Subcommands: analyze, dfa1d, dfa2d, dcca, synth.  Exit codes: 0 success
(item-level errors are embedded in the report), 1 input or analysis error,
2 manifest or configuration error, 3 every stimulus failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence


from . import __version__
from .core import DEFAULT_N_SCALES, S_MIN
from .dcca import CrossResult, dcca_1d, image_pair_coefficient
from .dfa import ScalingResult, channel_exponents, dfa_1d, dfa_2d
from .errors import FractalError, ManifestError
from .pipeline import AnalysisConfig, RGB, classify_valence, emit_report, load_manifest, run_batch
from .signals import (
    Modality,
    Plane,
    RgbImage,
    TimeSeries,
    guess_modality,
    load_image,
    load_series,
    to_grayscale,
    write_pnm,
    write_wav,
)
from .synth import (
    gen_field_2d,
    gen_fgn_1d,
    gen_white_noise_1d,
    to_byte_range,
    to_pcm_range,
)

EXIT_OK, EXIT_ERROR, EXIT_CONFIG, EXIT_ALL_FAILED = 0, 1, 2, 3


class ConfigError(Exception):
    pass


def _parse_scales(text: Optional[str]) -> Dict[str, Any]:
    if text is None:
        return {}
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--scales expects MIN:MAX:N, got {text!r}")
    try:
        lo = int(parts[0]) if parts[0] else S_MIN
        hi = int(parts[1]) if parts[1] else None
        n = int(parts[2]) if parts[2] else DEFAULT_N_SCALES
    except ValueError:
        raise ConfigError(f"--scales expects integers, got {text!r}") from None
    return {"s_min": lo, "s_max": hi, "n_scales": n}


def _parse_fit_range(text: Optional[str]):
    if text is None:
        return None
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"--fit-range expects LO:HI, got {text!r}") from None
    return lo, hi


def _config(args, base: Optional[AnalysisConfig] = None) -> AnalysisConfig:
    base = base or AnalysisConfig()
    overrides = _parse_scales(args.scales)
    if args.fit_range is not None:
        overrides["fit_range"] = _parse_fit_range(args.fit_range)
    cfg = AnalysisConfig(**{**base.__dict__, **overrides})
    try:
        cfg.validate()
    except ManifestError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def _scaling_json(r: ScalingResult) -> Dict[str, Any]:
    return {
        "alpha": r.exponent,
        "r_squared": r.fit.r_squared,
        "fit_range": list(r.fit.fit_range),
        "s": r.curve.scales.tolist(),
        "F": r.curve.values.tolist(),
    }


def _cross_json(r: CrossResult) -> Dict[str, Any]:
    return {
        "lambda": r.lambda_,
        "gamma_x": r.gamma_x,
        "r_squared": r.fit.r_squared,
        "sign_consistent": r.sign_consistent,
        "s": r.curve.scales.tolist(),
        "F": r.curve.values.tolist(),
        "sign": r.curve.signs.tolist(),
    }


def _print(payload) -> None:
    print(json.dumps(payload, indent=2))


def cmd_analyze(args) -> int:
    manifest = load_manifest(args.manifest)
    if args.scales is not None or args.fit_range is not None:
        manifest = type(manifest)(manifest.stimuli, _config(args, manifest.config), manifest.base_dir)
    report = run_batch(manifest, jobs=args.jobs)
    formats = ("json", "csv") if args.format == "both" else (args.format,)
    for path in emit_report(report, args.out, formats):
        print(path)
    n_err = sum(1 for s in report.stimuli if s.error is not None)
    if n_err:
        print(f"{n_err} of {len(report.stimuli)} stimuli failed; see the report", file=sys.stderr)
    return EXIT_ALL_FAILED if report.all_failed else EXIT_OK


def cmd_dfa1d(args) -> int:
    cfg = _config(args)
    series = load_series(args.path)
    result = dfa_1d(series, cfg.grid(len(series)), cfg.fit_range)
    out = {"path": str(args.path), "length": len(series), **_scaling_json(result)}
    out["predicted_valence"] = classify_valence(result.exponent).value
    _print(out)
    return EXIT_OK


def cmd_dfa2d(args) -> int:
    cfg = _config(args)
    image = load_image(args.path)
    grid = cfg.grid(min(image.shape))
    out: Dict[str, Any] = {"path": str(args.path), "height": image.shape[0], "width": image.shape[1]}
    if args.channel == "gray":
        out["GRAY"] = _scaling_json(dfa_2d(to_grayscale(image), grid, cfg.fit_range))
    elif args.channel is not None:
        plane = {"r": image.red, "g": image.green, "b": image.blue}[args.channel]
        out[plane.channel_tag.value] = _scaling_json(dfa_2d(plane, grid, cfg.fit_range))
    else:
        res = channel_exponents(image, grid, cfg.fit_range)
        for c in RGB:
            out[c.value] = _scaling_json(res.results[c]) if c in res.results else {"error": str(res.errors[c])}
        if res.ok:
            out["alpha_mean"] = res.alpha_mean
            out["predicted_valence"] = classify_valence(res.alpha_mean).value
    _print(out)
    return EXIT_OK


def cmd_dcca(args) -> int:
    cfg = _config(args)
    kinds = {guess_modality(args.file_a), guess_modality(args.file_b)}
    if kinds == {Modality.AUDIO}:
        x, y = load_series(args.file_a), load_series(args.file_b)
        _print(_cross_json(dcca_1d(x, y, cfg.grid(min(len(x), len(y))), cfg.fit_range)))
    elif kinds == {Modality.IMAGE}:
        a, b = load_image(args.file_a), load_image(args.file_b)
        res = image_pair_coefficient(a, b, cfg.grid(min(a.shape)), cfg.fit_range)
        out: Dict[str, Any] = {c.value: _cross_json(r) for c, r in res.channels.items()}
        out.update({c.value: {"error": str(e)} for c, e in res.errors.items()})
        out["gamma_x_mean"] = res.gamma_x
        _print(out)
    else:
        raise ConfigError("dcca needs two audio files or two image files (.wav/.csv or .pgm/.ppm)")
    return EXIT_OK


def cmd_synth(args) -> int:
    out = Path(args.out)
    hurst = [float(h) for h in args.hurst.split(",")] if args.hurst else [0.5]
    if args.kind in ("noise1d", "fgn1d"):
        if len(hurst) != 1:
            raise ConfigError("1D generators take a single --hurst value")
        ts = (gen_white_noise_1d(args.len, args.seed) if args.kind == "noise1d"
              else gen_fgn_1d(args.len, hurst[0], args.seed))
        if out.suffix.lower() == ".csv":
            out.write_text("value\n" + "".join(f"{v!r}\n" for v in ts.samples.tolist()), encoding="utf-8")
        else:
            write_wav(TimeSeries(to_pcm_range(ts.samples), args.rate), out)
    else:
        if len(hurst) == 1:
            plane = gen_field_2d(args.len, hurst[0], args.seed)
            write_pnm(Plane(to_byte_range(plane.values)), out)
        elif len(hurst) == 3:
            chans = [to_byte_range(gen_field_2d(args.len, h, args.seed + k).values)
                     for k, h in enumerate(hurst)]
            write_pnm(RgbImage.from_arrays(*chans), out)
        else:
            raise ConfigError("field2d takes one --hurst value (PGM) or three (PPM, R,G,B)")
    print(out)
    return EXIT_OK


def _add_analysis_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scales", metavar="MIN:MAX:N", default=None,
                   help="scale grid; empty fields keep defaults (5, min_dim/4, 20)")
    p.add_argument("--fit-range", metavar="LO:HI", default=None,
                   help="fit only scales within [LO, HI]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fractalmodal",
        description="DFA / DCCA scaling exponents for audio (WAV) and images (PGM/PPM).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run a manifest and write the report")
    p.add_argument("--manifest", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--format", choices=["json", "csv", "both"], default="json")
    p.add_argument("--jobs", type=int, default=1)
    _add_analysis_opts(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dfa1d", help="DFA exponent of a WAV or one-column CSV series")
    p.add_argument("path", type=Path)
    _add_analysis_opts(p)
    p.set_defaults(func=cmd_dfa1d)

    p = sub.add_parser("dfa2d", help="2D-DFA exponents of a PGM/PPM image")
    p.add_argument("path", type=Path)
    p.add_argument("--channel", choices=["r", "g", "b", "gray"], default=None,
                   help="analyse one channel; default is R, G and B plus their mean")
    _add_analysis_opts(p)
    p.set_defaults(func=cmd_dfa2d)

    p = sub.add_parser("dcca", help="DCCA between two series or two images")
    p.add_argument("file_a", type=Path)
    p.add_argument("file_b", type=Path)
    _add_analysis_opts(p)
    p.set_defaults(func=cmd_dcca)

    p = sub.add_parser("synth", help="write a synthetic WAV/CSV/PGM/PPM fixture")
    p.add_argument("kind", choices=["noise1d", "fgn1d", "field2d"])
    p.add_argument("--hurst", default=None, help="H, or H_R,H_G,H_B for an RGB field")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--len", type=int, default=2**14, help="series length or field side")
    p.add_argument("--rate", type=int, default=8000, help="WAV sample rate")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ManifestError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FractalError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
