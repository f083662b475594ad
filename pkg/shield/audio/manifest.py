"""
Corpus manifests.

A manifest is a UTF-8 CSV with header ``path,label,source``. Paths are
relative to the corpus root and must resolve inside it.
"""

import csv
import logging
from pathlib import Path

from pydantic import ValidationError

from shield.audio.normalize import fit_length, peak_normalize_array
from shield.audio.wav import read_wav, resample, write_wav
from shield.config import DEFAULT_CLIP_LENGTH, DEFAULT_SAMPLE_RATE_HZ
from shield.exceptions import ManifestError
from shield.models.clip import LabeledClip, Manifest, ManifestEntry, Waveform

logger = logging.getLogger(__name__)

MANIFEST_HEADER = ["path", "label", "source"]


def parse_manifest(manifest: Path) -> Manifest:
    """
    Parse a manifest CSV.

    Raises:
        ManifestError: If the file is missing, the header is wrong or a row
            cannot be parsed (the message carries the 1-based row number)
    """
    if not manifest.is_file():
        raise ManifestError(f"manifest not found: {manifest}")

    entries = []
    with open(manifest, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            return Manifest()
        if [h.strip() for h in header] != MANIFEST_HEADER:
            raise ManifestError(
                f"{manifest}: header must be {','.join(MANIFEST_HEADER)}, got {header}"
            )
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ManifestError(
                    f"{manifest}: row {row_number} has {len(row)} fields, expected 3"
                )
            try:
                entries.append(
                    ManifestEntry(
                        path=row[0].strip(), label=row[1].strip(), source=row[2].strip()
                    )
                )
            except ValidationError as e:
                raise ManifestError(f"{manifest}: row {row_number}: {e}") from e
    return Manifest(entries=entries)


def _resolve(root: Path, relative: str) -> Path:
    root = root.resolve()
    path = (root / relative).resolve()
    if not path.is_relative_to(root):
        raise ManifestError(f"path escapes corpus root {root}: {relative}")
    return path


def load_manifest(
    root: Path,
    manifest: Path,
    sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ,
    clip_length: int = DEFAULT_CLIP_LENGTH,
) -> list[LabeledClip]:
    """
    Load every clip listed in a manifest.

    Clips are resampled to ``sample_rate_hz``, peak-normalized and
    truncated or zero-padded to ``clip_length``. Order follows the manifest.

    Args:
        root: Corpus root directory
        manifest: Manifest CSV path
        sample_rate_hz: Target sample rate
        clip_length: Target length T

    Returns:
        Loaded clips; the clip id is the manifest path
    """
    parsed = parse_manifest(manifest)
    clips = []
    for entry in parsed.entries:
        path = _resolve(root, entry.path)
        if not path.is_file():
            raise ManifestError(f"audio file not found: {path}")
        try:
            samples, source_hz = read_wav(path)
        except RuntimeError as e:
            raise ManifestError(f"cannot decode {path}: {e}") from e
        samples = resample(samples, source_hz, sample_rate_hz)
        samples = fit_length(peak_normalize_array(samples), clip_length)
        clips.append(
            LabeledClip(
                clip_id=entry.path,
                waveform=Waveform(samples=samples, sample_rate_hz=sample_rate_hz),
                label=entry.label,
                source=entry.source,
            )
        )
    logger.info(
        "Loaded manifest",
        extra={"json_fields": {"manifest": str(manifest), "clips": len(clips)}},
    )
    return clips


def write_corpus(clips: list[LabeledClip], root: Path) -> Path:
    """
    Write clips as 16-bit WAV files plus ``manifest.csv`` under ``root``.

    Files are named after the clip id; re-running with the same clips
    rewrites identical bytes.

    Returns:
        Path of the written manifest
    """
    root.mkdir(parents=True, exist_ok=True)
    manifest_path = root / "manifest.csv"
    rows = []
    for clip in clips:
        relative = f"{clip.label.value}/{clip.clip_id}.wav"
        write_wav(root / relative, clip.waveform.samples, clip.waveform.sample_rate_hz)
        rows.append([relative, clip.label.value, clip.source])
    with open(manifest_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(MANIFEST_HEADER)
        writer.writerows(rows)
    return manifest_path

