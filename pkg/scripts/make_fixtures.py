"""Regenerate the synthetic study under fixtures/.

Three "happy" and three "sad" clips (16-bit WAV, 8 kHz, 2^14 samples) and
three of each kind of image (256 x 256 PPM).  Happy clips are fractional
Gaussian noise (alpha < 1); sad clips are integrated noise (alpha > 1.5).
Happy images have their strongest correlations in red, sad images in
green and blue.  Ratings follow the 0-10 Anger/Fear/Happy/Sad layout.

Usage:
    python scripts/make_fixtures.py [fixtures_dir]
"""

import json
import sys
from pathlib import Path

import numpy as np

from fractalmodal.signals import RgbImage, TimeSeries, write_pnm, write_wav
from fractalmodal.synth import gen_fgn_1d, spectral_field_2d, to_byte_range, to_pcm_range

RATE = 8000
N_AUDIO = 2**14
IMAGE_SIZE = 256

# (id, target, hurst of the fGn, integrate?, ratings)
CLIPS = [
    ("clip1", "HAPPY", 0.40, False, {"Anger": 1.00, "Fear": 1.00, "Happy": 7.33, "Sad": 1.00}),
    ("clip2", "HAPPY", 0.30, False, {"Anger": 1.00, "Fear": 1.00, "Happy": 7.17, "Sad": 1.17}),
    ("clip3", "HAPPY", 0.45, False, {"Anger": 1.00, "Fear": 1.00, "Happy": 7.17, "Sad": 1.00}),
    ("clip4", "SAD", 0.60, True, {"Anger": 1.17, "Fear": 1.00, "Happy": 1.00, "Sad": 7.67}),
    ("clip5", "SAD", 0.70, True, {"Anger": 1.00, "Fear": 1.33, "Happy": 1.17, "Sad": 7.50}),
    ("clip6", "SAD", 0.80, True, {"Anger": 1.00, "Fear": 1.67, "Happy": 1.00, "Sad": 7.50}),
]

# (id, target, amplitude spectral exponents for R, G, B, ratings)
IMAGES = [
    ("image1", "HAPPY", (0.45, 0.15, 0.05), {"Anger": 0.35, "Fear": 0.20, "Happy": 8.91, "Sad": 0.62}),
    ("image2", "HAPPY", (0.50, 0.20, 0.10), {"Anger": 0.10, "Fear": 0.05, "Happy": 9.17, "Sad": 0.13}),
    ("image3", "HAPPY", (0.55, 0.25, 0.15), {"Anger": 2.12, "Fear": 0.25, "Happy": 8.29, "Sad": 0.23}),
    ("image4", "SAD", (1.00, 1.30, 1.35), {"Anger": 1.71, "Fear": 1.33, "Happy": 0.65, "Sad": 6.95}),
    ("image5", "SAD", (0.95, 1.25, 1.30), {"Anger": 0.09, "Fear": 1.27, "Happy": 2.15, "Sad": 6.88}),
    ("image6", "SAD", (0.90, 1.20, 1.25), {"Anger": 0.90, "Fear": 0.32, "Happy": 2.75, "Sad": 6.35}),
]


def main(root: Path) -> None:
    (root / "audio").mkdir(parents=True, exist_ok=True)
    (root / "images").mkdir(parents=True, exist_ok=True)
    stimuli = []
    for k, (cid, target, hurst, integrate, ratings) in enumerate(CLIPS):
        x = gen_fgn_1d(N_AUDIO, hurst, seed=100 + k).samples
        if integrate:
            x = np.cumsum(x)
        rel = f"audio/{cid}.wav"
        write_wav(TimeSeries(to_pcm_range(x), RATE), root / rel)
        stimuli.append({"id": cid, "modality": "AUDIO", "path": rel, "target": target, "ratings": ratings})
    for k, (iid, target, exps, ratings) in enumerate(IMAGES):
        chans = [to_byte_range(spectral_field_2d(IMAGE_SIZE, e, seed=200 + 3 * k + c))
                 for c, e in enumerate(exps)]
        rel = f"images/{iid}.ppm"
        write_pnm(RgbImage.from_arrays(*chans), root / rel)
        stimuli.append({"id": iid, "modality": "IMAGE", "path": rel, "target": target, "ratings": ratings})
    manifest = {
        "schema_version": 1,
        "config": {"scales": {"min": 5, "max": None, "n": 20}, "fit_range": None},
        "stimuli": stimuli,
    }
    (root / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "fixtures")
