"""
Log-mel spectrogram front end.

Magnitude STFT (Hann window, no centre padding) followed by an HTK mel
filterbank spanning 0 Hz to Nyquist and log10 with a 1e-10 floor. The
same ``LogMel`` module feeds the spectrogram detector, so it is written
in torch and stays differentiable.
"""

import numpy as np
import torch
import torchaudio
from torch import nn

from shield.config import (
    DEFAULT_HOP,
    DEFAULT_N_MELS,
    DEFAULT_SAMPLE_RATE_HZ,
    DEFAULT_WIN,
    LOG_FLOOR,
)
from shield.exceptions import ShapeError
from shield.models.clip import Waveform
from shield.models.spectrogram import Spectrogram


def frame_count(length: int, win: int = DEFAULT_WIN, hop: int = DEFAULT_HOP) -> int:
    """floor((T - win) / hop) + 1 for T >= win."""
    if length < win:
        raise ShapeError(f"signal of {length} samples is shorter than window {win}")
    return (length - win) // hop + 1


def hz_to_mel(freq_hz):
    return 2595.0 * np.log10(1.0 + np.asarray(freq_hz) / 700.0)


def mel_to_hz(mel):
    return 700.0 * (10.0 ** (np.asarray(mel) / 2595.0) - 1.0)


def mel_band_centers(
    n_mels: int = DEFAULT_N_MELS, sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ
) -> np.ndarray:
    """Centre frequency in Hz of every HTK mel band."""
    mel_points = np.linspace(0.0, hz_to_mel(sample_rate_hz / 2), n_mels + 2)
    return mel_to_hz(mel_points[1:-1])


class LogMel(nn.Module):
    """(batch, T) waveforms -> (batch, n_mels, frames) log10 mel magnitudes."""

    def __init__(
        self,
        sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ,
        n_mels: int = DEFAULT_N_MELS,
        win: int = DEFAULT_WIN,
        hop: int = DEFAULT_HOP,
    ):
        super().__init__()
        self.sample_rate_hz = sample_rate_hz
        self.n_mels = n_mels
        self.win = win
        self.hop = hop
        fbank = torchaudio.functional.melscale_fbanks(
            n_freqs=win // 2 + 1,
            f_min=0.0,
            f_max=sample_rate_hz / 2,
            n_mels=n_mels,
            sample_rate=sample_rate_hz,
            norm=None,
            mel_scale="htk",
        )
        # Fixed transforms, excluded from checkpoints and optimizers
        self.register_buffer("fbank", fbank, persistent=False)
        self.register_buffer("window", torch.hann_window(win), persistent=False)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.shape[-1] < self.win:
            raise ShapeError(
                f"signal of {x.shape[-1]} samples is shorter than window {self.win}"
            )
        spec = torch.stft(
            x,
            n_fft=self.win,
            hop_length=self.hop,
            win_length=self.win,
            window=self.window.to(x.dtype),
            center=False,
            return_complex=True,
        ).abs()
        mel = torch.matmul(spec.transpose(-1, -2), self.fbank.to(x.dtype))
        return torch.log10(mel.clamp_min(LOG_FLOOR)).transpose(-1, -2)


def log_mel_spectrogram(
    w: Waveform,
    n_mels: int = DEFAULT_N_MELS,
    win: int = DEFAULT_WIN,
    hop: int = DEFAULT_HOP,
) -> Spectrogram:
    """
    Compute the log-mel spectrogram of one waveform in float64.

    Raises:
        ShapeError: If the waveform is shorter than the window
    """
    frame_count(w.length, win, hop)
    front_end = LogMel(w.sample_rate_hz, n_mels, win, hop).double()
    with torch.no_grad():
        bins = front_end(torch.from_numpy(w.samples.astype(np.float64))[None])[0]
    return Spectrogram(bins=bins.numpy(), n_mels=n_mels, hop=hop, win=win)


def spectral_centroid(w: Waveform) -> float:
    """Magnitude-weighted mean frequency of the whole clip in Hz."""
    magnitude = np.abs(np.fft.rfft(w.samples.astype(np.float64)))
    freqs = np.fft.rfftfreq(w.length, d=1.0 / w.sample_rate_hz)
    total = magnitude.sum()
    return float((freqs * magnitude).sum() / total) if total > 0 else 0.0
