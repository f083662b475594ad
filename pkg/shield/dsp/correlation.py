"""Correlation between a clip and its reconstruction."""

import numpy as np
from scipy.stats import pearsonr

from shield.exceptions import ShapeError
from shield.models.clip import Waveform


def pearson_correlation(a: Waveform, b: Waveform) -> float:
    """
    Pearson r over raw time-domain samples.

    Raises:
        ShapeError: If the lengths differ
        ValueError: If either input is constant (correlation undefined)
    """
    if a.length != b.length:
        raise ShapeError(f"length mismatch: {a.length} vs {b.length}")
    x = a.samples.astype(np.float64)
    y = b.samples.astype(np.float64)
    # pearsonr only warns and returns nan here
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        raise ValueError("correlation is undefined for a constant signal")
    return float(np.clip(pearsonr(x, y).statistic, -1.0, 1.0))
