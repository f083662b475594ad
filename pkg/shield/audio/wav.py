"""
WAV file reading and writing.

Reads RIFF WAV as PCM 16-bit or float32 (first channel of multi-channel
files) and writes 16-bit PCM.
"""

from math import gcd
from pathlib import Path

import numpy as np
import soundfile as sf
from scipy.signal import resample_poly

PCM_SCALE = 32768


def read_wav(path: Path) -> tuple[np.ndarray, int]:
    """
    Read the first channel of a WAV file as float64.

    Args:
        path: WAV file path

    Returns:
        Tuple of (samples, sample_rate_hz)
    """
    data, sample_rate = sf.read(str(path), dtype="float64", always_2d=True)
    return data[:, 0], int(sample_rate)


def write_wav(path: Path, samples: np.ndarray, sample_rate_hz: int) -> None:
    """
    Write mono 16-bit PCM, creating parent directories.

    Samples map to integers with the same 1/32768 scale the reader divides
    by, so a round trip is off by at most one quantization step.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    scaled = np.round(np.asarray(samples, dtype=np.float64) * PCM_SCALE)
    sf.write(
        str(path),
        np.clip(scaled, -PCM_SCALE, PCM_SCALE - 1).astype(np.int16),
        sample_rate_hz,
        subtype="PCM_16",
        format="WAV",
    )


def resample(samples: np.ndarray, source_hz: int, target_hz: int) -> np.ndarray:
    """Polyphase resampling by the reduced ratio target/source."""
    if source_hz == target_hz:
        return np.asarray(samples, dtype=np.float64)
    factor = gcd(source_hz, target_hz)
    return resample_poly(samples, target_hz // factor, source_hz // factor)
