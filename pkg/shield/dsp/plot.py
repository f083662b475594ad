"""
Spectrogram image export.

Writes a grayscale raster (time on x, mel band on y with low bands at the
bottom, intensity proportional to log magnitude) plus a sidecar CSV of the
raw bins.
"""

import csv
from pathlib import Path

import numpy as np
from PIL import Image

from shield.models.spectrogram import Spectrogram

# Each spectrogram cell becomes an UPSCALE x UPSCALE pixel block
UPSCALE = 4


def spectrogram_to_image(s: Spectrogram) -> Image.Image:
    """Min-max scale the bins to 8-bit grayscale; a flat spectrogram maps to black."""
    spec_min = float(np.min(s.bins))
    spec_max = float(np.max(s.bins))
    spec_range = spec_max - spec_min or 1.0
    normalized = (s.bins - spec_min) / spec_range
    pixels = (normalized * 255).clip(0, 255).astype(np.uint8)
    image = Image.fromarray(np.ascontiguousarray(np.flipud(pixels)))
    return image.resize(
        (pixels.shape[1] * UPSCALE, pixels.shape[0] * UPSCALE),
        resample=Image.Resampling.NEAREST,
    )


def write_bins_csv(s: Spectrogram, path: Path) -> None:
    """Row-major bins, one mel band per row, 6 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        for band in s.bins:
            writer.writerow([f"{value:.6g}" for value in band])


def read_bins_csv(path: Path) -> np.ndarray:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return np.array([[float(v) for v in row] for row in csv.reader(f)])


def export_spectrogram_plot(s: Spectrogram, path: Path) -> tuple[Path, Path]:
    """
    Write the spectrogram image and its sidecar CSV.

    The image format follows the extension of ``path``; the CSV is written
    next to it with a ``.csv`` suffix.

    Args:
        s: Spectrogram to export
        path: Image path (e.g. ``clip.png``)

    Returns:
        Tuple of (image_path, csv_path)

    Raises:
        OSError: If the location is not writable
    """
    path = Path(path)
    csv_path = path.with_suffix(".csv")
    spectrogram_to_image(s).save(path)
    write_bins_csv(s, csv_path)
    return path, csv_path
