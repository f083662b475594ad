"""
Waveform normalization and length fitting.
"""

import numpy as np

from shield.exceptions import InvariantViolation, ShapeError
from shield.models.clip import Waveform


def peak_normalize_array(samples: np.ndarray) -> np.ndarray:
    """Scale an array so that its largest magnitude is 1.0; silence passes through."""
    samples = np.asarray(samples, dtype=np.float64)
    peak = float(np.max(np.abs(samples))) if samples.size else 0.0
    if peak == 0.0:
        return samples.copy()
    return samples / peak


def peak_normalize(w: Waveform) -> Waveform:
    """
    Peak-normalize a waveform to max |sample| = 1.0.

    Silent input is returned unchanged.

    Args:
        w: Waveform to normalize

    Returns:
        Normalized waveform with the same shape and sample rate
    """
    if not np.any(w.samples):
        return w
    samples = w.samples.astype(np.float64)
    peak = float(np.max(np.abs(samples)))
    scaled = (samples / peak).astype(np.float32)
    # float32 rounding can land a hair above 1.0 after the division
    np.clip(scaled, -1.0, 1.0, out=scaled)
    return Waveform(samples=scaled, sample_rate_hz=w.sample_rate_hz)


def fit_length(samples: np.ndarray, length: int) -> np.ndarray:
    """Truncate or zero-pad (at the end) to exactly ``length`` samples."""
    samples = np.asarray(samples)
    if samples.shape[0] >= length:
        return samples[:length]
    return np.pad(samples, (0, length - samples.shape[0]))


def check_length(w: Waveform, length: int, what: str = "clip") -> None:
    """Raise ShapeError unless the waveform has exactly ``length`` samples."""
    if w.length != length:
        raise ShapeError(f"{what} has {w.length} samples, expected {length}")


def validate_waveform(w: Waveform, length: int | None = None) -> None:
    """
    Re-check the Waveform invariants on an existing instance.

    Raises:
        InvariantViolation: If a sample is non-finite or outside [-1, 1]
        ShapeError: If ``length`` is given and does not match
    """
    if not np.all(np.isfinite(w.samples)):
        raise InvariantViolation("waveform contains non-finite samples")
    if float(np.max(np.abs(w.samples))) > 1.0:
        raise InvariantViolation("waveform exceeds [-1, 1]")
    if length is not None:
        check_length(w, length)
