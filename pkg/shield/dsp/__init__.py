"""
Deterministic signal transforms: log-mel spectrograms, correlation and
spectrogram export.
"""

from shield.dsp.correlation import pearson_correlation
from shield.dsp.plot import export_spectrogram_plot, read_bins_csv
from shield.dsp.spectrogram import (
    LogMel,
    frame_count,
    log_mel_spectrogram,
    mel_band_centers,
    spectral_centroid,
)

__all__ = [
    "LogMel",
    "export_spectrogram_plot",
    "frame_count",
    "log_mel_spectrogram",
    "mel_band_centers",
    "pearson_correlation",
    "read_bins_csv",
    "spectral_centroid",
]
