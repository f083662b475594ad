"""
Synthetic corpus generation.

Real clips are harmonic tone stacks with band-limited noise under a smooth
random envelope. Fake clips are the same kind of signal pushed through a
fixed artifact chain: 6-bit quantization, a 3.4 kHz low-pass and phase
discontinuities at 512-sample frame boundaries. Both generators are pure
functions of (seed, n).
"""

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.signal import butter, hilbert, sosfiltfilt

from shield.audio.normalize import peak_normalize_array
from shield.config import (
    DEFAULT_CLIP_LENGTH,
    DEFAULT_SAMPLE_RATE_HZ,
    LOWPASS_CUTOFF_HZ,
    PHASE_JUMP_FRAME,
    QUANTIZATION_BITS,
)
from shield.exceptions import ConfigError
from shield.models.clip import ClipLabel, LabeledClip, Waveform

# Independent RNG streams per generator role
_REAL_STREAM = 0
_FAKE_BASE_STREAM = 1
_ARTIFACT_STREAM = 2

F0_RANGE_HZ = (100.0, 300.0)
HARMONIC_RANGE = (3, 6)
NOISE_BAND_HZ = (300.0, 7000.0)


def _voice(rng: np.random.Generator, sample_rate_hz: int, length: int) -> np.ndarray:
    """One harmonic stack with band-limited noise and a smooth envelope."""
    t = np.arange(length) / sample_rate_hz

    f0 = rng.uniform(*F0_RANGE_HZ)
    n_harmonics = int(rng.integers(HARMONIC_RANGE[0], HARMONIC_RANGE[1] + 1))
    decay = rng.uniform(0.45, 0.8)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n_harmonics)

    tone = np.zeros(length)
    for h in range(1, n_harmonics + 1):
        if f0 * h >= sample_rate_hz / 2:
            break
        tone += decay ** (h - 1) * np.sin(2.0 * np.pi * f0 * h * t + phases[h - 1])

    nyquist = sample_rate_hz / 2
    low, high = NOISE_BAND_HZ[0], min(NOISE_BAND_HZ[1], 0.9 * nyquist)
    if high <= low:
        raise ConfigError(f"sample rate {sample_rate_hz} Hz is too low to synthesize")
    sos = butter(4, [low, high], btype="bandpass", fs=sample_rate_hz, output="sos")
    noise = sosfiltfilt(sos, rng.standard_normal(length))
    noise *= rng.uniform(0.05, 0.2) * np.std(tone) / (np.std(noise) + 1e-12)

    n_points = int(rng.integers(4, 9))
    knots = np.linspace(0.0, length - 1, n_points)
    levels = rng.uniform(0.2, 1.0, size=n_points)
    envelope = PchipInterpolator(knots, levels)(np.arange(length))

    return peak_normalize_array(envelope * (tone + noise))


def quantize(samples: np.ndarray, bits: int = QUANTIZATION_BITS) -> np.ndarray:
    """
    Round to the mid-tread grid with step 2^-(bits-1).

    Output is clipped to [-1, 1 - step], leaving exactly 2^bits levels. For 6
    bits the step is 1/32, so 0.377 maps to 0.375 and 1.0 maps to 31/32.
    """
    scale = float(2 ** (bits - 1))
    top = 1.0 - 1.0 / scale
    return np.clip(np.round(np.asarray(samples) * scale) / scale, -1.0, top)


def lowpass(
    samples: np.ndarray,
    sample_rate_hz: int,
    cutoff_hz: float = LOWPASS_CUTOFF_HZ,
    order: int = 8,
) -> np.ndarray:
    """
    Zero-phase Butterworth low-pass.

    The cutoff is capped at 0.45 of the sample rate so low-rate corpora still
    get a valid filter.
    """
    cutoff_hz = min(cutoff_hz, 0.45 * sample_rate_hz)
    sos = butter(order, cutoff_hz, btype="low", fs=sample_rate_hz, output="sos")
    return sosfiltfilt(sos, samples)


def phase_jumps(
    samples: np.ndarray, rng: np.random.Generator, frame: int = PHASE_JUMP_FRAME
) -> np.ndarray:
    """Rotate the analytic signal of every frame by a random phase."""
    out = np.empty_like(samples, dtype=np.float64)
    for start in range(0, samples.shape[0], frame):
        segment = samples[start : start + frame]
        phi = rng.uniform(np.pi / 4, 3 * np.pi / 4) * rng.choice([-1.0, 1.0])
        out[start : start + frame] = np.real(hilbert(segment) * np.exp(1j * phi))
    return out


def apply_fake_artifacts(
    samples: np.ndarray, rng: np.random.Generator, sample_rate_hz: int
) -> np.ndarray:
    """Quantization, low-pass and phase discontinuities, then peak normalization."""
    corrupted = quantize(samples)
    corrupted = lowpass(corrupted, sample_rate_hz)
    corrupted = phase_jumps(corrupted, rng)
    return peak_normalize_array(corrupted)


def _make_clip(
    samples: np.ndarray,
    label: ClipLabel,
    source: str,
    seed: int,
    index: int,
    sample_rate_hz: int,
) -> LabeledClip:
    return LabeledClip(
        clip_id=f"{source}-{label.value}-{seed}-{index:05d}",
        waveform=Waveform(samples=samples, sample_rate_hz=sample_rate_hz),
        label=label,
        source=source,
    )


def synth_real(
    seed: int,
    n: int,
    sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ,
    clip_length: int = DEFAULT_CLIP_LENGTH,
    source: str = "synthetic",
) -> list[LabeledClip]:
    """
    Generate ``n`` deterministic real clips.

    Args:
        seed: Generator seed
        n: Number of clips (>= 1)
        sample_rate_hz: Output sample rate
        clip_length: Samples per clip
        source: Provenance tag written on every clip

    Returns:
        Clips labelled real, in generation order
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng([seed, _REAL_STREAM])
    return [
        _make_clip(
            _voice(rng, sample_rate_hz, clip_length),
            ClipLabel.REAL,
            source,
            seed,
            i,
            sample_rate_hz,
        )
        for i in range(n)
    ]


def synth_fake(
    seed: int,
    n: int,
    sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ,
    clip_length: int = DEFAULT_CLIP_LENGTH,
    source: str = "synthetic",
) -> list[LabeledClip]:
    """
    Generate ``n`` deterministic fake clips.

    Each clip starts as a real-style voice drawn from its own RNG stream and
    is corrupted by the artifact chain.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    base_rng = np.random.default_rng([seed, _FAKE_BASE_STREAM])
    artifact_rng = np.random.default_rng([seed, _ARTIFACT_STREAM])
    clips = []
    for i in range(n):
        voice = _voice(base_rng, sample_rate_hz, clip_length)
        fake = apply_fake_artifacts(voice, artifact_rng, sample_rate_hz)
        clips.append(
            _make_clip(fake, ClipLabel.FAKE, source, seed, i, sample_rate_hz)
        )
    return clips
